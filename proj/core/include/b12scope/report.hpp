#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "b12scope/profiles.hpp"
#include "b12scope/regional.hpp"
#include "b12scope/term_models.hpp"

namespace b12scope {

struct ReportStamp {
  std::string version;
  std::string config_hash;

  // `# key=value` lines for CSV outputs.
  std::vector<std::string> csv_comments() const;
};

void write_validation_csv(std::ostream& out, const ValidationResult& validation,
                          const std::optional<stats::CorrelationResult>& consumption,
                          const ReportStamp& stamp);

// Ranked targets and controls, `top_k` of each.
std::string render_table2(const std::vector<TermModelResult>& results, CorrelationMethod method,
                          std::size_t top_k, const ReportStamp& stamp);

// `comparison` is nullopt when a list had no usable model; `why` says which.
std::string render_comparison(const std::optional<TargetControlComparison>& comparison,
                              const std::string& why, CorrelationMethod method,
                              const ReportStamp& stamp);

std::string render_indications(const std::optional<IndicationsModelResult>& model,
                               const std::string& why, bool with_interaction,
                               const ReportStamp& stamp);

struct CohortOutcome {
  EstimateMode mode = EstimateMode::Mean;
  std::optional<CohortComparison> comparison;
  std::string why;  // set when comparison is nullopt
};

std::string render_awareness(const AwarenessReport& awareness, const std::vector<CohortOutcome>& cohorts,
                             EstimateMode primary, const ReportStamp& stamp);

}  // namespace b12scope
