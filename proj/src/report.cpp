#include "stencilfab/report.hpp"

#include <sstream>

#include "stencilfab/cost_model.hpp"
#include "stencilfab/errors.hpp"

namespace stencilfab {

using nlohmann::ordered_json;

ordered_json sim_report_json(const MappingPlan& plan, const FabricSpec& fabric,
                             const SimResult& result) {
    ordered_json j;
    j["report_version"] = 1;
    j["design"] = plan.design;
    j["kernel"] = plan.kernel;
    j["dtype"] = dtype_name(plan.dtype);
    j["grid"] = {{"rows", plan.rows}, {"cols", plan.cols}, {"depth", plan.depth}};
    j["clock_ghz"] = fabric.clock_ghz;
    j["cores_used"] = static_cast<int>(plan.slots.size());
    j["runtime_cycles"] = result.runtime_cycles;
    j["runtime_us"] =
        static_cast<double>(result.runtime_cycles) / (fabric.clock_ghz * 1000.0);
    j["steady_row_period"] = result.steady_row_period;
    j["predicted_row_period"] = predict_row_period(plan, fabric);
    j["rows_written"] = result.rows_written;
    j["bytes_in"] = result.bytes_in;
    j["bytes_out"] = result.bytes_out;

    ordered_json cores = ordered_json::array();
    for (const auto& c : result.cores) {
        const CoreSlot& slot = plan.slots[c.slot];
        cores.push_back({{"slot", c.slot},
                         {"role", role_name(c.role)},
                         {"col", slot.col},
                         {"row", slot.row},
                         {"busy_cycles", c.busy_cycles},
                         {"rows_computed", c.rows_computed},
                         {"utilization", c.utilization}});
    }
    j["cores"] = std::move(cores);

    ordered_json links = ordered_json::array();
    for (const auto& l : result.links) {
        links.push_back({{"fifo", l.fifo},
                         {"link", link_kind_name(l.link)},
                         {"transfers", l.transfers},
                         {"bytes_moved", l.bytes_moved},
                         {"bytes_delivered", l.bytes_delivered},
                         {"busy_cycles", l.busy_cycles}});
    }
    j["links"] = std::move(links);
    return j;
}

std::string sim_report_csv(const MappingPlan& plan, const FabricSpec& fabric,
                           const SimResult& result) {
    std::ostringstream os;
    os << "design,kernel,dtype,rows,cols,depth,cores_used,runtime_cycles,"
          "steady_row_period,predicted_row_period,rows_written,bytes_in,bytes_out\n";
    os << plan.design << ',' << plan.kernel << ',' << dtype_name(plan.dtype) << ','
       << plan.rows << ',' << plan.cols << ',' << plan.depth << ',' << plan.slots.size()
       << ',' << result.runtime_cycles << ',' << result.steady_row_period << ','
       << predict_row_period(plan, fabric) << ',' << result.rows_written << ','
       << result.bytes_in << ',' << result.bytes_out << '\n';
    return os.str();
}

const std::vector<std::string>& report_required_keys() {
    static const std::vector<std::string> keys = {
        "report_version", "design",           "kernel",
        "dtype",          "grid",             "clock_ghz",
        "cores_used",     "runtime_cycles",   "runtime_us",
        "steady_row_period", "predicted_row_period", "rows_written",
        "bytes_in",       "bytes_out",        "cores",
        "links"};
    return keys;
}

void verify_report_json(const nlohmann::json& doc) {
    if (!doc.is_object()) fail_validation("report is not a JSON object");
    for (const auto& key : report_required_keys())
        if (!doc.contains(key))
            fail_validation("report is missing required key '" + key + "'");
    if (!doc["report_version"].is_number_integer() ||
        doc["report_version"].get<int>() != 1)
        fail_validation("unsupported report_version (expected 1)");
    if (!doc["grid"].is_object() || !doc["grid"].contains("rows") ||
        !doc["grid"].contains("cols") || !doc["grid"].contains("depth"))
        fail_validation("report grid must carry rows, cols, depth");
    if (!doc["cores"].is_array() || !doc["links"].is_array())
        fail_validation("report cores/links must be arrays");
}

} // namespace stencilfab
