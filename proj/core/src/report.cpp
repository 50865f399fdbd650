#include "pdm/report.hpp"

#include <cmath>
#include <string>

#include <json.hpp>

namespace pdm {

namespace {

using json = nlohmann::ordered_json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void put_dataset(json &doc, const DatasetSummary &data) {
    doc["m"] = data.m;
    doc["d"] = data.d;
    doc["R"] = number(data.radius);
    doc["delta"] = number(data.delta);
    doc["rho"] = number(data.rho);
    doc["scale"] = number(data.scale);
    doc["nonzeros"] = data.nonzeros;
}

void put_report(json &doc, const TrainReport &r, const std::string &prefix) {
    doc[prefix + "algorithm"] = std::string(to_string(r.algorithm));
    if (r.epsilon) doc[prefix + "epsilon"] = number(*r.epsilon);
    if (r.beta) doc[prefix + "beta"] = number(*r.beta);
    doc[prefix + "converged"] = r.converged;
    doc[prefix + "t_c"] = r.t_c;
    doc[prefix + "epochs"] = r.epochs;
    doc[prefix + "presentations"] = r.presentations;
    doc[prefix + "gamma_prime_d"] = number(r.gamma_prime_d);
    doc[prefix + "argmin"] = r.argmin;
    doc[prefix + "norm_a"] = number(r.norm_a);
    doc[prefix + "after_run_estimate"] = r.after_run_estimate ? number(*r.after_run_estimate) : json(nullptr);
    doc[prefix + "max_relative_norm_drift"] = number(r.max_relative_norm_drift);
    if (!r.stages.empty()) {
        doc[prefix + "stages"] = r.stages.size();
        for (std::size_t i = 0; i < r.stages.size(); ++i) {
            const auto &s = r.stages[i];
            const std::string key = prefix + "stage_" + std::to_string(i) + "_";
            doc[key + "epsilon"] = number(s.epsilon);
            doc[key + "t_c"] = s.t_c;
            doc[key + "epochs"] = s.epochs;
            doc[key + "converged"] = s.converged;
            doc[key + "norm_a"] = number(s.norm_a);
        }
    }
    if (r.eq6) {
        doc[prefix + "eq6_checked"] = r.eq6->checked;
        doc[prefix + "eq6_max_abs_residual"] = number(r.eq6->max_abs_residual);
        doc[prefix + "eq6_max_scaled_residual"] = number(r.eq6->max_scaled_residual);
    }
    if (!r.abort_reason.empty()) doc[prefix + "abort_reason"] = r.abort_reason;
    doc[prefix + "wall_seconds"] = number(r.wall_seconds);
}

}  // namespace

DatasetSummary summarize(const WorkingDataset &ds) noexcept {
    return {ds.size(), ds.feature_dim(), ds.radius(), ds.delta(), ds.rho(), ds.scale(), ds.nonzeros()};
}

ReportExtras oracle_extras(const TrainReport &report, const OracleResult &oracle, double radius) {
    ReportExtras extras;
    extras.oracle = oracle;
    std::optional<double> eps = report.epsilon;
    if (!eps && report.beta && oracle.gamma_d > 0.0) {
        const double e = 1.0 - *report.beta / oracle.gamma_d;
        if (e > 0.0 && e <= 1.0) eps = e;
    }
    if (eps) {
        extras.bound_epsilon = eps;
        extras.verdict = verify_sandwich(report, oracle, *eps);
        if (oracle.gamma_d > 0.0 && radius >= oracle.gamma_d) {
            extras.theorem1 = theorem1_bound(*eps, radius, oracle.gamma_d);
            extras.theorem2 = theorem2_bound(*eps, radius, oracle.gamma_d);
        }
    }
    return extras;
}

std::string train_report_json(const DatasetSummary &data, const TrainReport &report, const ReportExtras &extras) {
    json doc = json::object();
    put_dataset(doc, data);
    if (extras.seed) doc["seed"] = *extras.seed;
    put_report(doc, report, "");
    if (extras.oracle) {
        doc["oracle_gamma_d"] = number(extras.oracle->gamma_d);
        doc["oracle_lower"] = number(extras.oracle->lower);
        doc["oracle_gap"] = number(extras.oracle->gap);
        doc["oracle_iterations"] = extras.oracle->iterations;
        doc["oracle_converged"] = extras.oracle->converged;
    }
    if (extras.verdict) {
        doc["sandwich"] = extras.verdict->detail;
        doc["sandwich_pass"] = extras.verdict->pass;
    }
    if (extras.bound_epsilon) doc["bound_epsilon"] = number(*extras.bound_epsilon);
    if (extras.theorem1) doc["theorem1_bound"] = number(*extras.theorem1);
    if (extras.theorem2) {
        doc["theorem2_bound_loose"] = number(extras.theorem2->loose);
        doc["theorem2_bound_tightened"] = number(extras.theorem2->tightened);
    }
    return doc.dump(2) + "\n";
}

std::string experiment_summary_json(const DatasetSummary &data, const ExperimentResult &result) {
    json doc = json::object();
    put_dataset(doc, data);
    put_report(doc, result.dynamic_run.report, "dynamic_");
    if (result.fixed_run) {
        put_report(doc, result.fixed_run->report, "fixed_");
        doc["update_ratio"] = number(result.update_ratio());
        doc["margin_gain"] = number(result.margin_gain());
    } else {
        doc["fixed_run"] = "skipped";
    }
    return doc.dump(2) + "\n";
}

}  // namespace pdm
