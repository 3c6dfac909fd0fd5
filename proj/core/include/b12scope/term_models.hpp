#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "b12scope/lexicon.hpp"
#include "b12scope/profiles.hpp"
#include "b12scope/stats.hpp"

namespace b12scope {

enum class CohortFilter : std::uint8_t { Unaware, All };
enum class CorrelationMethod : std::uint8_t { Pearson, Spearman };
enum class TermModelKind : std::uint8_t { Linear, Logistic };

std::string_view cohort_filter_name(CohortFilter f);
std::optional<CohortFilter> parse_cohort_filter(std::string_view s);
std::string_view correlation_method_name(CorrelationMethod m);
std::optional<CorrelationMethod> parse_correlation_method(std::string_view s);
std::string_view model_kind_name(TermModelKind k);
std::optional<TermModelKind> parse_model_kind(std::string_view s);

struct TermSelection {
  std::string term;
  TermKind kind = TermKind::Target;
  TermCategory category = TermCategory::Control;
  std::size_t n_askers = 0;
};

// Terms asked by at least `threshold` users, in lexicon order.
std::vector<TermSelection> select_modeled_terms(const ProfileStore& store, const TermLexicon& lexicon,
                                                std::size_t threshold);

struct TermModelResult {
  std::string term;
  TermKind kind = TermKind::Target;
  TermCategory category = TermCategory::Control;
  std::size_t n_askers = 0;     // over all users
  std::size_t n_users_fit = 0;  // after the cohort filter
  std::size_t n_positive = 0;   // askers among fitted users
  FoodVector coefficients{};
  double intercept = 0.0;
  double r2_i = 0.0;
  std::optional<double> cob12;  // under the configured method
  std::optional<double> cob12_pearson;
  std::optional<double> cob12_spearman;
  bool degenerate = false;
  std::string reason;  // why the result is degenerate
};

struct FitOptions {
  CohortFilter filter = CohortFilter::Unaware;
  CorrelationMethod method = CorrelationMethod::Pearson;
  TermModelKind kind = TermModelKind::Linear;
  unsigned threads = 1;
};

// Correlation between a coefficient vector and the nutrient content vector;
// nullopt when either is constant.
std::optional<double> cob12(const FoodVector& coefficients, const NutrientTable& table,
                            CorrelationMethod method);

TermModelResult fit_term_model(const ProfileStore& store, const TermSelection& term,
                               const NutrientTable& table, const FitOptions& options);

// Same as fit_term_model per term, sharing the design matrix; fits run in parallel
// and results come back in input order.
std::vector<TermModelResult> fit_all_terms(const ProfileStore& store,
                                           const std::vector<TermSelection>& terms,
                                           const NutrientTable& table, const FitOptions& options);

// Non-degenerate results by r2_i descending, then n_askers descending, then term;
// degenerate results follow in term order.
std::vector<TermModelResult> rank_terms(std::vector<TermModelResult> results);

struct TargetControlComparison {
  std::size_t top_k = 10;
  std::size_t targets_used = 0;  // < top_k means the list was short
  std::size_t controls_used = 0;
  std::size_t degenerate_targets = 0;
  std::size_t degenerate_controls = 0;
  double median_r2_target = 0.0;
  double median_r2_control = 0.0;
  std::optional<double> median_r2_ratio;
  double r2_ranksum_p = 1.0;
  std::optional<stats::CorrelationResult> r2_vs_askers_target;
  std::optional<stats::CorrelationResult> r2_vs_cob12_target;
  std::optional<stats::CorrelationResult> r2_vs_cob12_control;
  double mean_cob12_target = 0.0;
  double mean_cob12_control = 0.0;
  double cob12_ranksum_p = 1.0;
  std::size_t positive_cob12_target = 0;
  std::size_t positive_cob12_control = 0;
  FoodVector mean_abs_coef_target{};  // per food over target models
  std::optional<double> min_ratio_to_tomato;     // smallest non-tomato food / tomato
  std::optional<double> pooled_ratio_to_tomato;  // mean over non-tomato foods / tomato
};

TargetControlComparison target_vs_control(const std::vector<TermModelResult>& targets,
                                          const std::vector<TermModelResult>& controls,
                                          std::size_t top_k = 10);

struct IndicationsModelResult {
  double slope_askers = 0.0;
  double slope_indications = 0.0;
  double slope_pain = 0.0;
  std::optional<double> slope_interaction;
  double p_askers = 1.0;
  double p_indications = 1.0;
  double p_pain = 1.0;
  std::optional<double> p_interaction;
  double r_squared = 0.0;
  double model_p_value = 1.0;
  std::size_t n = 0;
  bool degenerate = false;
  std::optional<stats::CorrelationResult> indications_vs_askers;
  std::optional<stats::CorrelationResult> pain_vs_askers;
  std::size_t n_spearman = 0;
};

inline constexpr std::size_t kIndicationsMinRows = 5;

IndicationsModelResult indications_model(const std::vector<TermModelResult>& results,
                                         const IndicationsTable& indications,
                                         bool with_interaction = false);

void write_results_csv(std::ostream& out, const std::vector<TermModelResult>& results,
                       const std::vector<std::string>& header_comments);
std::vector<TermModelResult> read_results_csv(std::istream& in);
std::vector<TermModelResult> read_results_file(const std::filesystem::path& path);

}  // namespace b12scope
