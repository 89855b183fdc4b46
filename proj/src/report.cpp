#include "sdelab/report.hpp"

#include <fstream>
#include <sstream>

#include "sdelab/errors.hpp"

namespace sdelab::report {

namespace {

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string num(double v) { return format_double(v); }

void stat(std::ostringstream& out, const std::string& name, const std::string& value) {
    out << name << ',' << value << '\n';
}

void quantile_rows(std::ostringstream& out, const std::string& prefix, const Quantiles& q) {
    stat(out, prefix + "_q05", num(q.q05));
    stat(out, prefix + "_q25", num(q.q25));
    stat(out, prefix + "_q50", num(q.q50));
    stat(out, prefix + "_q75", num(q.q75));
    stat(out, prefix + "_q95", num(q.q95));
}

}  // namespace

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string verdict_text(const TheoremVerdict& verdict) {
    std::ostringstream out;
    out << "theorem: " << to_string(verdict.theorem) << '\n';
    for (const ConditionResult& c : verdict.conditions) {
        out << "  condition " << c.id << ": " << to_string(c.status) << " (quantity " << num(c.quantity) << ")";
        if (!c.note.empty()) out << " - " << c.note;
        out << '\n';
    }
    out << "conclusion: " << to_string(verdict.conclusion) << '\n';
    if (!verdict.claim.empty()) out << "claim: " << verdict.claim << '\n';
    if (verdict.small_k_required) out << "note: holds for sufficiently small step k\n";
    return out.str();
}

std::string verdicts_csv(const std::vector<TheoremVerdict>& verdicts) {
    std::ostringstream out;
    out << "theorem_id,condition_id,status,quantity\n";
    for (const TheoremVerdict& v : verdicts) {
        for (const ConditionResult& c : v.conditions)
            out << to_string(v.theorem) << ',' << csv_field(c.id) << ',' << to_string(c.status) << ','
                << num(c.quantity) << '\n';
        out << to_string(v.theorem) << ",conclusion," << to_string(v.conclusion) << ",0\n";
    }
    return out.str();
}

std::string trajectory_csv(const std::vector<TrajectoryPoint>& trajectory) {
    std::ostringstream out;
    out << "n,x\n";
    for (const TrajectoryPoint& pt : trajectory) out << pt.n << ',' << num(pt.x) << '\n';
    return out.str();
}

std::string path_summary_csv(const PathSummary& s) {
    std::ostringstream out;
    out << "statistic,value\n";
    stat(out, "final_value", num(s.final_value));
    stat(out, "running_max", num(s.running_max));
    stat(out, "running_min", num(s.running_min));
    stat(out, "argmax", std::to_string(s.argmax));
    stat(out, "argmin", std::to_string(s.argmin));
    stat(out, "steps", std::to_string(s.steps));
    stat(out, "overflow", s.overflow ? "1" : "0");
    for (std::size_t i = 0; i < s.first_below.size(); ++i)
        stat(out, "first_below_" + std::to_string(i), s.first_below[i] ? std::to_string(*s.first_below[i]) : "");
    for (std::size_t i = 0; i < s.first_above.size(); ++i)
        stat(out, "first_above_" + std::to_string(i), s.first_above[i] ? std::to_string(*s.first_above[i]) : "");
    if (s.martingale_final) stat(out, "martingale_final", num(*s.martingale_final));
    if (s.martingale_mean_abs_dev) stat(out, "martingale_mean_abs_dev", num(*s.martingale_mean_abs_dev));
    if (s.mean_log_multiplier) stat(out, "mean_log_multiplier", num(*s.mean_log_multiplier));
    return out.str();
}

std::string paths_csv(const EnsembleResult& result) {
    std::ostringstream out;
    out << "replica,final,max,min,argmax,argmin,overflow,M_N\n";
    for (std::size_t r = 0; r < result.paths.size(); ++r) {
        const PathSummary& s = result.paths[r];
        out << r << ',' << num(s.final_value) << ',' << num(s.running_max) << ',' << num(s.running_min) << ','
            << s.argmax << ',' << s.argmin << ',' << (s.overflow ? 1 : 0) << ','
            << (s.martingale_final ? num(*s.martingale_final) : std::string()) << '\n';
    }
    return out.str();
}

std::string summary_csv(const EnsembleResult& r) {
    std::ostringstream out;
    out << "statistic,value\n";
    stat(out, "replicas", std::to_string(r.replicas));
    stat(out, "horizon", std::to_string(r.horizon));
    stat(out, "master_seed", std::to_string(r.master_seed));
    stat(out, "surrogate_eps_conv", num(r.surrogate.eps_conv));
    stat(out, "surrogate_window", std::to_string(r.surrogate.window));
    stat(out, "surrogate_c_div", num(r.surrogate.c_div));
    stat(out, "surrogate_grid_stride", std::to_string(r.effective_stride));
    stat(out, "p_converged", num(r.p_converged));
    stat(out, "p_diverged", num(r.p_diverged));
    stat(out, "p_overflow", num(r.p_overflow));
    for (double C : r.thresholds) stat(out, "p_exceeded_" + num(C), num(r.p_exceeded(C)));
    quantile_rows(out, "final", r.final_value);
    quantile_rows(out, "running_min", r.running_min);
    for (const CheckpointQuantiles& cp : r.checkpoints) quantile_rows(out, "x_" + std::to_string(cp.n), cp.x);
    if (r.martingale_mean) stat(out, "martingale_mean", num(*r.martingale_mean));
    if (r.martingale_se) stat(out, "martingale_se", num(*r.martingale_se));
    return out.str();
}

std::string decay_csv(const DecayRateResult& result) {
    std::ostringstream out;
    out << "n,log_median,log_p95,median,p95\n";
    for (const DecayCheckpoint& cp : result.checkpoints)
        out << cp.n << ',' << num(cp.log_median) << ',' << num(cp.log_p95) << ',' << num(cp.median) << ','
            << num(cp.p95) << '\n';
    return out.str();
}

std::string probe_csv(const std::vector<ProbeRow>& rows) {
    std::ostringstream out;
    out << "p,label,p_converged\n";
    for (const ProbeRow& row : rows)
        out << num(row.p) << ',' << csv_field(std::string(to_string(row.label))) << ',' << num(row.p_converged)
            << '\n';
    return out.str();
}

}  // namespace sdelab::report
