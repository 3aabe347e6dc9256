#include "stencilfab/sweep.hpp"

#include <sstream>

#include "stencilfab/cost_model.hpp"
#include "stencilfab/elementary.hpp"
#include "stencilfab/errors.hpp"
#include "stencilfab/hdiff.hpp"
#include "stencilfab/simulator.hpp"

namespace stencilfab {

using nlohmann::ordered_json;

SweepResult run_sweep(const std::vector<std::string>& designs, const std::string& kernel,
                      const Grid3& input, const FabricSpec& fabric,
                      const BuildOptions& opts) {
    if (designs.empty()) fail_parameter("sweep needs at least one design");
    SweepResult result;
    result.kernel = kernel;
    result.rows = input.rows();
    result.cols = input.cols();
    result.depth = input.depth();

    Grid3 expected;
    if (kernel == "hdiff") {
        HdiffParams params;
        params.coeff = opts.coeff;
        params.srs_shift = opts.srs_shift;
        params.no_limiter = opts.no_limiter;
        expected = hdiff_reference(input, params);
    } else {
        expected = apply_elementary(input, stencil_spec(kernel));
    }

    for (const auto& design : designs) {
        MappingPlan plan = build_plan(design, kernel, input.rows(), input.cols(),
                                      input.depth(), fabric, opts);
        SimResult sim = simulate(input, plan, fabric);
        SweepRow row;
        row.design = design;
        row.cores_used = static_cast<int>(plan.slots.size());
        row.runtime_cycles = sim.runtime_cycles;
        row.steady_row_period = sim.steady_row_period;
        row.predicted_row_period = predict_row_period(plan, fabric);
        row.output_matches = compare_grids(expected, sim.output).match;
        result.rows_out.push_back(std::move(row));
    }
    const double base = static_cast<double>(result.rows_out.front().runtime_cycles);
    for (auto& row : result.rows_out)
        row.speedup = row.runtime_cycles > 0
                          ? base / static_cast<double>(row.runtime_cycles)
                          : 0.0;
    return result;
}

ordered_json sweep_json(const SweepResult& result) {
    ordered_json j;
    j["kernel"] = result.kernel;
    j["grid"] = {{"rows", result.rows}, {"cols", result.cols}, {"depth", result.depth}};
    ordered_json rows = ordered_json::array();
    for (const auto& r : result.rows_out)
        rows.push_back({{"design", r.design},
                        {"cores_used", r.cores_used},
                        {"runtime_cycles", r.runtime_cycles},
                        {"steady_row_period", r.steady_row_period},
                        {"predicted_row_period", r.predicted_row_period},
                        {"speedup", r.speedup},
                        {"output_matches", r.output_matches}});
    j["designs"] = std::move(rows);
    return j;
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream os;
    os << "design,cores_used,runtime_cycles,steady_row_period,predicted_row_period,"
          "speedup,output_matches\n";
    for (const auto& r : result.rows_out)
        os << r.design << ',' << r.cores_used << ',' << r.runtime_cycles << ','
           << r.steady_row_period << ',' << r.predicted_row_period << ',' << r.speedup
           << ',' << (r.output_matches ? 1 : 0) << '\n';
    return os.str();
}

} // namespace stencilfab
