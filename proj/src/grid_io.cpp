#include "stencilfab/grid_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "stencilfab/errors.hpp"

namespace stencilfab {

namespace {

constexpr unsigned char kMagic[4] = {0x53, 0x50, 0x52, 0x54}; // "SPRT"
constexpr uint16_t kVersion = 1;

void put_u16(std::ostream& os, uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>(v >> 8)};
    os.write(reinterpret_cast<const char*>(b), 2);
}

void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 4);
}

uint16_t get_u16(std::istream& is) {
    unsigned char b[2];
    is.read(reinterpret_cast<char*>(b), 2);
    return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

} // namespace

void save_grid(const Grid3& grid, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail_io("cannot open '" + path + "' for writing");
    os.write(reinterpret_cast<const char*>(kMagic), 4);
    put_u16(os, kVersion);
    const unsigned char dtype_byte = grid.dtype() == DType::I32 ? 0 : 1;
    const unsigned char reserved = 0;
    os.write(reinterpret_cast<const char*>(&dtype_byte), 1);
    os.write(reinterpret_cast<const char*>(&reserved), 1);
    put_u32(os, static_cast<uint32_t>(grid.rows()));
    put_u32(os, static_cast<uint32_t>(grid.cols()));
    put_u32(os, static_cast<uint32_t>(grid.depth()));
    const int R = grid.rows(), C = grid.cols(), D = grid.depth();
    for (int d = 0; d < D; ++d)
        for (int r = 0; r < R; ++r)
            for (int c = 0; c < C; ++c) {
                uint32_t word;
                if (grid.dtype() == DType::I32) {
                    const int32_t v = grid.i32(r, c, d);
                    std::memcpy(&word, &v, 4);
                } else {
                    const float v = grid.f32(r, c, d);
                    std::memcpy(&word, &v, 4);
                }
                put_u32(os, word);
            }
    if (!os) fail_io("write failed for '" + path + "'");
}

Grid3 load_grid(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) fail_io("cannot open '" + path + "' for reading");
    unsigned char magic[4];
    is.read(reinterpret_cast<char*>(magic), 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        fail_validation("'" + path + "' is not a grid container (bad magic)");
    const uint16_t version = get_u16(is);
    if (version != kVersion)
        fail_validation("unsupported grid container version " + std::to_string(version));
    unsigned char dtype_byte = 0, reserved = 0;
    is.read(reinterpret_cast<char*>(&dtype_byte), 1);
    is.read(reinterpret_cast<char*>(&reserved), 1);
    if (dtype_byte > 1) fail_validation("bad dtype byte in '" + path + "'");
    if (reserved != 0) fail_validation("reserved header byte must be 0 in '" + path + "'");
    const uint32_t rows = get_u32(is), cols = get_u32(is), depth = get_u32(is);
    if (!is) fail_validation("truncated header in '" + path + "'");
    if (rows == 0 || cols == 0 || depth == 0 || rows > (1u << 20) || cols > (1u << 20) ||
        depth > (1u << 20))
        fail_validation("implausible grid dimensions in '" + path + "'");
    Grid3 g(dtype_byte == 0 ? DType::I32 : DType::F32, static_cast<int>(rows),
            static_cast<int>(cols), static_cast<int>(depth));
    for (int d = 0; d < static_cast<int>(depth); ++d)
        for (int r = 0; r < static_cast<int>(rows); ++r)
            for (int c = 0; c < static_cast<int>(cols); ++c) {
                const uint32_t word = get_u32(is);
                if (g.dtype() == DType::I32) {
                    int32_t v;
                    std::memcpy(&v, &word, 4);
                    g.i32(r, c, d) = v;
                } else {
                    float v;
                    std::memcpy(&v, &word, 4);
                    g.f32(r, c, d) = v;
                }
            }
    if (!is) fail_validation("truncated payload in '" + path + "'");
    return g;
}

Grid3 load_csv_plane(const std::string& path, DType dtype) {
    std::ifstream is(path);
    if (!is) fail_io("cannot open '" + path + "' for reading");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            try {
                row.push_back(std::stod(field));
            } catch (const std::exception&) {
                fail_validation("bad CSV field '" + field + "' in '" + path + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail_validation("ragged CSV rows in '" + path + "'");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail_validation("empty CSV file '" + path + "'");
    Grid3 g(dtype, static_cast<int>(rows.size()), static_cast<int>(rows.front().size()), 1);
    for (int r = 0; r < g.rows(); ++r)
        for (int c = 0; c < g.cols(); ++c) {
            if (dtype == DType::I32)
                g.i32(r, c, 0) = static_cast<int32_t>(rows[r][c]);
            else
                g.f32(r, c, 0) = static_cast<float>(rows[r][c]);
        }
    return g;
}

void save_csv_plane(const Grid3& grid, int d, const std::string& path) {
    if (d < 0 || d >= grid.depth()) fail_parameter("csv plane index out of range");
    std::ofstream os(path);
    if (!os) fail_io("cannot open '" + path + "' for writing");
    for (int r = 0; r < grid.rows(); ++r) {
        for (int c = 0; c < grid.cols(); ++c) {
            if (c) os << ',';
            if (grid.dtype() == DType::I32)
                os << grid.i32(r, c, d);
            else
                os << grid.f32(r, c, d);
        }
        os << '\n';
    }
    if (!os) fail_io("write failed for '" + path + "'");
}

} // namespace stencilfab
