#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sdelab/analysis.hpp"
#include "sdelab/engine.hpp"
#include "sdelab/ensemble.hpp"

namespace sdelab::report {

/// Writes `content` to a temporary sibling file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string verdict_text(const TheoremVerdict& verdict);
/// Header `theorem_id,condition_id,status,quantity`, one row per condition.
std::string verdicts_csv(const std::vector<TheoremVerdict>& verdicts);

/// Header `n,x`.
std::string trajectory_csv(const std::vector<TrajectoryPoint>& trajectory);
/// Header `statistic,value`.
std::string path_summary_csv(const PathSummary& summary);

/// Header `replica,final,max,min,argmax,argmin,overflow,M_N`.
std::string paths_csv(const EnsembleResult& result);
/// Header `statistic,value`; includes the surrogate definitions.
std::string summary_csv(const EnsembleResult& result);

/// Header `n,log_median,log_p95,median,p95`.
std::string decay_csv(const DecayRateResult& result);
/// Header `p,label,p_converged`.
std::string probe_csv(const std::vector<ProbeRow>& rows);

}  // namespace sdelab::report
