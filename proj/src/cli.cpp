#include "stencilfab/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "stencilfab/analytic.hpp"
#include "stencilfab/cost_model.hpp"
#include "stencilfab/elementary.hpp"
#include "stencilfab/generate.hpp"
#include "stencilfab/grid_io.hpp"
#include "stencilfab/hdiff.hpp"
#include "stencilfab/mapper.hpp"
#include "stencilfab/op_count.hpp"
#include "stencilfab/report.hpp"
#include "stencilfab/roofline.hpp"
#include "stencilfab/simulator.hpp"
#include "stencilfab/sweep.hpp"
#include "stencilfab/version.hpp"

namespace stencilfab {

using nlohmann::ordered_json;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Semantic:
        case ErrorKind::Deadlock: return 1;
        default: return 2;
    }
}

namespace {

std::string hex64(uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_io("cannot open '" + path + "' for writing");
    out << text;
    if (!out) fail_io("write to '" + path + "' failed");
}

void emit_json(const ordered_json& j, const std::string& path) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty())
        std::cout << text;
    else
        write_text(path, text);
}

/// Shared grid-source options: an explicit container file wins over
/// pattern generation.
struct GridOpts {
    int rows = 16, cols = 16, depth = 1;
    std::string dtype = "i32";
    std::string pattern = "random:1";
    std::string input;

    void add_to(CLI::App* cmd, bool with_dtype) {
        cmd->add_option("--rows", rows, "grid rows");
        cmd->add_option("--cols", cols, "grid cols");
        cmd->add_option("--depth", depth, "grid planes");
        if (with_dtype) cmd->add_option("--dtype", dtype, "element type (i32|f32)");
        cmd->add_option("--pattern", pattern,
                        "input fill: constant:<v>|ramp|impulse:<v>|random:<seed>");
        cmd->add_option("--input", input, "read the input grid from this container file");
    }

    Grid3 make(DType want) const {
        if (!input.empty()) {
            Grid3 g = load_grid(input);
            if (g.dtype() != want)
                fail_parameter("input grid is " + std::string(dtype_name(g.dtype())) +
                               " but the run needs " + dtype_name(want));
            return g;
        }
        return make_pattern(pattern, want, rows, cols, depth);
    }
};

Grid3 golden_output(const std::string& kernel, const Grid3& in, double coeff,
                    int srs_shift, bool no_limiter, int sweeps) {
    if (kernel == "hdiff") {
        HdiffParams params;
        params.coeff = coeff;
        params.srs_shift = srs_shift;
        params.no_limiter = no_limiter;
        params.sweeps = sweeps;
        return hdiff_reference(in, params);
    }
    return apply_elementary(in, stencil_spec(kernel), sweeps);
}

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"stencilfab: spatial-array stencil modeling and dataflow simulation"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // --- golden ---
    auto* golden = app.add_subcommand("golden", "run the golden reference kernel");
    GridOpts ggrid;
    ggrid.add_to(golden, true);
    std::string gkernel = "hdiff";
    double gcoeff = 1.0;
    int gshift = 0, gsweeps = 1, gplane = 0;
    bool gnolim = false;
    std::string goutput, gcsv;
    golden->add_option("--kernel", gkernel, "hdiff or an elementary stencil name");
    golden->add_option("--coeff", gcoeff, "diffusion coefficient (hdiff)");
    golden->add_option("--srs-shift", gshift, "integer store shift (hdiff, i32)");
    golden->add_option("--sweeps", gsweeps, "repeated applications");
    golden->add_flag("--no-limiter", gnolim, "drop the monotonic flux test (hdiff)");
    golden->add_option("--output", goutput, "write the result grid to this container file");
    golden->add_option("--csv-plane", gcsv, "write one result plane as CSV");
    golden->add_option("--plane", gplane, "plane index for --csv-plane");
    golden->callback([&] {
        const DType dt = dtype_from_name(ggrid.dtype);
        const Grid3 in = ggrid.make(dt);
        const Grid3 out = golden_output(gkernel, in, gcoeff, gshift, gnolim, gsweeps);
        if (!goutput.empty()) save_grid(out, goutput);
        if (!gcsv.empty()) save_csv_plane(out, gplane, gcsv);
        ordered_json j;
        j["kernel"] = gkernel;
        j["dtype"] = dtype_name(out.dtype());
        j["grid"] = {{"rows", out.rows()}, {"cols", out.cols()}, {"depth", out.depth()}};
        j["sweeps"] = gsweeps;
        j["checksum_in"] = hex64(grid_checksum(in));
        j["checksum_out"] = hex64(grid_checksum(out));
        emit_json(j, "");
    });

    // --- analyze ---
    auto* analyze = app.add_subcommand("analyze", "closed-form compute/memory cycle model");
    int arows = 256, acols = 256, adepth = 64;
    std::string afabric;
    analyze->add_option("--rows", arows, "grid rows")->required();
    analyze->add_option("--cols", acols, "grid cols")->required();
    analyze->add_option("--depth", adepth, "grid planes")->required();
    analyze->add_option("--fabric", afabric, "fabric JSON supplying the datapath");
    analyze->callback([&] {
        const DatapathSpec dp =
            afabric.empty() ? DatapathSpec{} : load_fabric(afabric).datapath;
        emit_json(analytic_report_json(analyze_hdiff(arows, acols, adepth, dp)), "");
    });

    // --- simulate ---
    auto* simulate_cmd =
        app.add_subcommand("simulate", "simulate one design and verify its output");
    GridOpts sgrid;
    sgrid.rows = 64;
    sgrid.cols = 64;
    sgrid.depth = 8;
    sgrid.add_to(simulate_cmd, true);
    std::string sdesign, skernel = "hdiff", sfabric, sreport, scsv, soutput, strace;
    double scoeff = 1.0;
    int sshift = 0;
    bool snolim = false;
    simulate_cmd->add_option("--design", sdesign, "design string (see README)")->required();
    simulate_cmd->add_option("--kernel", skernel, "hdiff or an elementary stencil name");
    simulate_cmd->add_option("--coeff", scoeff, "diffusion coefficient (hdiff)");
    simulate_cmd->add_option("--srs-shift", sshift, "integer store shift (hdiff, i32)");
    simulate_cmd->add_flag("--no-limiter", snolim, "drop the monotonic flux test (hdiff)");
    simulate_cmd->add_option("--fabric", sfabric, "fabric JSON file");
    simulate_cmd->add_option("--report", sreport, "write the report JSON here (else stdout)");
    simulate_cmd->add_option("--csv", scsv, "write the report summary CSV here");
    simulate_cmd->add_option("--output", soutput, "write the simulated grid here");
    simulate_cmd->add_option("--trace", strace, "write per-fifo op traces (JSON) here");
    simulate_cmd->callback([&] {
        const FabricSpec fabric = sfabric.empty() ? FabricSpec{} : load_fabric(sfabric);
        BuildOptions opts;
        opts.coeff = scoeff;
        opts.srs_shift = sshift;
        opts.no_limiter = snolim;
        opts.elem_dtype = dtype_from_name(sgrid.dtype);
        int rows = sgrid.rows, cols = sgrid.cols, depth = sgrid.depth;
        Grid3 in;
        if (!sgrid.input.empty()) {
            in = load_grid(sgrid.input);
            rows = in.rows();
            cols = in.cols();
            depth = in.depth();
        }
        MappingPlan plan = build_plan(sdesign, skernel, rows, cols, depth, fabric, opts);
        if (sgrid.input.empty())
            in = make_pattern(sgrid.pattern, plan.dtype, rows, cols, depth);
        else if (in.dtype() != plan.dtype)
            fail_parameter("input grid is " + std::string(dtype_name(in.dtype())) +
                           " but design '" + sdesign + "' computes in " +
                           dtype_name(plan.dtype));

        SimOptions sim_opts;
        sim_opts.trace_fifos = !strace.empty();
        const SimResult sim = simulate(in, plan, fabric, sim_opts);

        const Grid3 expected =
            golden_output(skernel, in, scoeff, sshift, snolim, 1);
        const GridDelta delta = compare_grids(expected, sim.output);
        if (!delta.match)
            fail_semantic("simulated output differs from the reference at (" +
                          std::to_string(delta.first_r) + ", " +
                          std::to_string(delta.first_c) + ", " +
                          std::to_string(delta.first_d) + "), " +
                          std::to_string(delta.mismatches) + " cells out of tolerance");

        if (!soutput.empty()) save_grid(sim.output, soutput);
        if (!scsv.empty()) write_text(scsv, sim_report_csv(plan, fabric, sim));
        if (!strace.empty()) {
            ordered_json traces;
            for (const auto& [name, events] : sim.traces) {
                ordered_json seq = ordered_json::array();
                for (const auto& ev : events)
                    seq.push_back({{"op", fifo_op_name(ev.op)},
                                   {"consumer", ev.consumer},
                                   {"count", ev.count}});
                traces[name] = std::move(seq);
            }
            write_text(strace, traces.dump(2) + "\n");
        }
        emit_json(sim_report_json(plan, fabric, sim), sreport);
    });

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "simulate a list of designs");
    GridOpts wgrid;
    wgrid.rows = 64;
    wgrid.cols = 64;
    wgrid.depth = 8;
    wgrid.add_to(sweep_cmd, true);
    std::string wdesigns, wkernel = "hdiff", wfabric, wjson, wcsv;
    double wcoeff = 1.0;
    int wshift = 0;
    bool wnolim = false;
    sweep_cmd->add_option("--designs", wdesigns,
                          "comma-separated designs (default: all hdiff designs)");
    sweep_cmd->add_option("--kernel", wkernel, "hdiff or an elementary stencil name");
    sweep_cmd->add_option("--coeff", wcoeff, "diffusion coefficient (hdiff)");
    sweep_cmd->add_option("--srs-shift", wshift, "integer store shift (hdiff, i32)");
    sweep_cmd->add_flag("--no-limiter", wnolim, "drop the monotonic flux test (hdiff)");
    sweep_cmd->add_option("--fabric", wfabric, "fabric JSON file");
    sweep_cmd->add_option("--json", wjson, "write the table JSON here (else stdout)");
    sweep_cmd->add_option("--csv", wcsv, "write the table CSV here");
    sweep_cmd->callback([&] {
        const FabricSpec fabric = wfabric.empty() ? FabricSpec{} : load_fabric(wfabric);
        BuildOptions opts;
        opts.coeff = wcoeff;
        opts.srs_shift = wshift;
        opts.no_limiter = wnolim;
        opts.elem_dtype = dtype_from_name(wgrid.dtype);
        std::vector<std::string> designs =
            wdesigns.empty() ? hdiff_design_names() : split_csv_list(wdesigns);
        if (designs.empty()) fail_parameter("--designs lists no designs");
        // All sweep designs must agree on the compute dtype for one input grid.
        const DType dt = wkernel == "hdiff" ? parse_design(designs.front()).dtype
                                            : opts.elem_dtype;
        for (const auto& d : designs)
            if (wkernel == "hdiff" && parse_design(d).dtype != dt)
                fail_parameter("sweep mixes i32 and f32 designs; run them separately");
        Grid3 in = wgrid.make(dt);
        const SweepResult result = run_sweep(designs, wkernel, in, fabric, opts);
        if (!wcsv.empty()) write_text(wcsv, sweep_csv(result));
        emit_json(sweep_json(result), wjson);
        for (const auto& row : result.rows_out)
            if (!row.output_matches)
                fail_semantic("design '" + row.design +
                              "' produced output differing from the reference");
    });

    // --- roofline ---
    auto* roofline = app.add_subcommand("roofline", "platform table and roofline math");
    double rai = 0.0;
    std::string rplatforms, rreport;
    roofline->add_option("--ai", rai, "arithmetic intensity (FLOP/byte) for attainable");
    roofline->add_option("--platforms", rplatforms, "platform table JSON file");
    roofline->add_option("--sim-report", rreport,
                         "simulation report to place on the spatial-array roofline");
    roofline->callback([&] {
        const std::vector<PlatformSpec> table =
            rplatforms.empty() ? builtin_platforms() : load_platforms(rplatforms);
        ordered_json j = roofline_table_json(table, rai);
        if (!rreport.empty()) {
            std::ifstream f(rreport);
            if (!f) fail_io("cannot open report '" + rreport + "'");
            nlohmann::json rep = nlohmann::json::parse(f, nullptr, false);
            if (rep.is_discarded()) fail_io("report '" + rreport + "' is not valid JSON");
            verify_report_json(rep);
            const std::string kernel = rep["kernel"].get<std::string>();
            const int rows = rep["grid"]["rows"].get<int>();
            const int cols = rep["grid"]["cols"].get<int>();
            const int depth = rep["grid"]["depth"].get<int>();
            const OpCount ops =
                kernel == "hdiff"
                    ? hdiff_op_count(rows, cols, depth)
                    : elementary_op_count(stencil_spec(kernel), rows, cols, depth);
            const double cycles = rep["runtime_cycles"].get<double>();
            const double clock = rep["clock_ghz"].get<double>();
            if (cycles <= 0) fail_parameter("report has zero runtime");
            const double achieved =
                static_cast<double>(ops.total_ops()) * clock / cycles;
            const double bytes = rep["bytes_in"].get<double>() +
                                 rep["bytes_out"].get<double>();
            const PlatformSpec& spatial = platform_by_name("xcvc1902");
            ordered_json sim;
            sim["design"] = rep["design"];
            sim["kernel"] = kernel;
            sim["total_ops"] = ops.total_ops();
            sim["achieved_gflops"] = achieved;
            sim["arithmetic_intensity"] =
                bytes > 0 ? static_cast<double>(ops.total_ops()) / bytes : 0.0;
            sim["reference_platform"] = spatial.name;
            sim["percent_of_peak"] = percent_of_peak(achieved, spatial.peak_gflops);
            j["simulated"] = std::move(sim);
        }
        emit_json(j, "");
    });

    // --- compare ---
    auto* compare = app.add_subcommand("compare", "compare two grid container files");
    std::string ca, cb;
    double ctol = 1e-5;
    compare->add_option("--a", ca, "first grid file")->required();
    compare->add_option("--b", cb, "second grid file")->required();
    compare->add_option("--tol", ctol, "relative tolerance for f32 grids");
    compare->callback([&] {
        const Grid3 a = load_grid(ca);
        const Grid3 b = load_grid(cb);
        if (!a.same_shape(b))
            fail_parameter("grids have different shapes or dtypes");
        const GridDelta delta = compare_grids(a, b, ctol);
        ordered_json j;
        j["match"] = delta.match;
        j["mismatches"] = delta.mismatches;
        j["max_rel_error"] = delta.max_rel_error;
        if (!delta.match)
            j["first_mismatch"] = {{"r", delta.first_r},
                                   {"c", delta.first_c},
                                   {"d", delta.first_d}};
        emit_json(j, "");
        if (!delta.match)
            fail_semantic("grids differ in " + std::to_string(delta.mismatches) +
                          " cells");
    });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace stencilfab
