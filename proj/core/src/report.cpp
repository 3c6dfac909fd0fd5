#include "b12scope/report.hpp"

#include <ostream>

#include <fmt/format.h>

#include "b12scope/csv.hpp"

namespace b12scope {

std::vector<std::string> ReportStamp::csv_comments() const {
  return {fmt::format("version={}", version), fmt::format("config_hash={}", config_hash)};
}

namespace {

std::string stamp_line(const ReportStamp& s) {
  return fmt::format("_b12scope {}, config {}_\n\n", s.version, s.config_hash);
}

std::string pvalue(double p) {
  if (p < 1e-300) return "<1e-300";
  return fmt::format("{:.3g}", p);
}

std::string opt_num(const std::optional<double>& v, std::string_view spec = "{:.3f}") {
  return v ? fmt::format(fmt::runtime(spec), *v) : std::string("n/a");
}

std::string correlation_cell(const std::optional<stats::CorrelationResult>& c) {
  if (!c) return "undefined";
  return fmt::format("{:.3f} (p = {}, N = {}{})", c->coefficient, pvalue(c->p_value), c->n,
                     c->exact_p ? ", exact" : "");
}

void term_table(std::string& md, const std::vector<const TermModelResult*>& rows, CorrelationMethod method) {
  md += fmt::format("| Rank | Term | Category | Askers | Users fit | R2_I | CoB12 ({}) | CoB12 Pearson | CoB12 Spearman |\n",
                    correlation_method_name(method));
  md += "|---:|---|---|---:|---:|---:|---:|---:|---:|\n";
  std::size_t rank = 0;
  for (const auto* r : rows) {
    md += fmt::format("| {} | {} | {} | {} | {} | {:.3e} | {} | {} | {} |\n", ++rank, r->term,
                      category_name(r->category), r->n_askers, r->n_users_fit, r->r2_i, opt_num(r->cob12),
                      opt_num(r->cob12_pearson), opt_num(r->cob12_spearman));
  }
  if (rows.empty()) md += "| | (none) | | | | | | | |\n";
}

}  // namespace

void write_validation_csv(std::ostream& out, const ValidationResult& v,
                          const std::optional<stats::CorrelationResult>& consumption,
                          const ReportStamp& stamp) {
  for (const auto& c : stamp.csv_comments()) out << "# " << c << '\n';
  out << fmt::format("# spearman_rho={:.17g}\n", v.correlation.coefficient);
  out << fmt::format("# spearman_p={:.17g}\n", v.correlation.p_value);
  out << fmt::format("# n={}\n", v.correlation.n);
  std::string excluded;
  for (auto r : v.excluded_regions) {
    if (!excluded.empty()) excluded += ';';
    excluded += region_name(r);
  }
  out << "# excluded_regions=" << excluded << '\n';
  if (consumption) {
    out << fmt::format("# consumption_rho={:.17g}\n", consumption->coefficient);
    out << fmt::format("# consumption_p={:.17g}\n", consumption->p_value);
  } else {
    out << "# consumption_rho=undefined\n";
  }
  out << "region,group,share,expenditure_fraction\n";
  for (const auto& row : v.rows) {
    out << fmt::format("{},{},{:.17g},{:.17g}\n", region_name(row.region), group_name(row.group), row.share,
                       row.expenditure_fraction);
  }
}

std::string render_table2(const std::vector<TermModelResult>& results, CorrelationMethod method,
                          std::size_t top_k, const ReportStamp& stamp) {
  const auto ranked = rank_terms(results);
  std::vector<const TermModelResult*> targets, controls;
  std::size_t degenerate = 0;
  for (const auto& r : ranked) {
    if (r.degenerate) {
      ++degenerate;
      continue;
    }
    auto& list = r.kind == TermKind::Target ? targets : controls;
    if (list.size() < top_k) list.push_back(&r);
  }
  std::string md = "# Best-fitting term models\n\n";
  md += stamp_line(stamp);
  md += fmt::format(
      "Terms ranked by R2_I of the individual-level model predicting the term flag from the 12 "
      "food-search counts. {} models fitted, {} degenerate and left out.\n\n",
      results.size(), degenerate);
  md += fmt::format("## Target terms (top {})\n\n", top_k);
  term_table(md, targets, method);
  md += fmt::format("\n## Control terms (top {})\n\n", top_k);
  term_table(md, controls, method);
  if (degenerate) {
    md += "\n## Degenerate models\n\n| Term | Kind | Askers | Reason |\n|---|---|---:|---|\n";
    for (const auto& r : ranked) {
      if (r.degenerate) {
        md += fmt::format("| {} | {} | {} | {} |\n", r.term, term_kind_name(r.kind), r.n_askers, r.reason);
      }
    }
  }
  return md;
}

std::string render_comparison(const std::optional<TargetControlComparison>& c, const std::string& why,
                              CorrelationMethod method, const ReportStamp& stamp) {
  std::string md = "# Target vs control terms\n\n";
  md += stamp_line(stamp);
  if (!c) {
    md += fmt::format("Comparison undefined: {}\n", why);
    return md;
  }
  md += fmt::format("Top {} non-degenerate models of each list by R2_I; CoB12 by {}.\n\n", c->top_k,
                    correlation_method_name(method));
  md += "| Quantity | Targets | Controls |\n|---|---:|---:|\n";
  md += fmt::format("| Models used | {} | {} |\n", c->targets_used, c->controls_used);
  md += fmt::format("| Degenerate models | {} | {} |\n", c->degenerate_targets, c->degenerate_controls);
  md += fmt::format("| Median R2_I | {:.3e} | {:.3e} |\n", c->median_r2_target, c->median_r2_control);
  md += fmt::format("| Mean CoB12 | {:.3f} | {:.3f} |\n", c->mean_cob12_target, c->mean_cob12_control);
  md += fmt::format("| Positive CoB12 | {} | {} |\n\n", c->positive_cob12_target, c->positive_cob12_control);
  md += "| Test | Value |\n|---|---|\n";
  md += fmt::format("| Median R2_I ratio (targets / controls) | {} |\n", opt_num(c->median_r2_ratio, "{:.2f}"));
  md += fmt::format("| R2_I ranksum p | {} |\n", pvalue(c->r2_ranksum_p));
  md += fmt::format("| CoB12 ranksum p | {} |\n", pvalue(c->cob12_ranksum_p));
  md += fmt::format("| Spearman R2_I vs askers (targets) | {} |\n", correlation_cell(c->r2_vs_askers_target));
  md += fmt::format("| Spearman R2_I vs CoB12 (targets) | {} |\n", correlation_cell(c->r2_vs_cob12_target));
  md += fmt::format("| Spearman R2_I vs CoB12 (controls) | {} |\n\n", correlation_cell(c->r2_vs_cob12_control));
  md += "## Mean absolute coefficient per food (targets)\n\n| Food | Mean abs coefficient |\n|---|---:|\n";
  for (std::size_t f = 0; f < kFoodCount; ++f) {
    md += fmt::format("| {} | {:.3e} |\n", food_name(kFoodOrder[f]), c->mean_abs_coef_target[f]);
  }
  md += fmt::format("\nSmallest non-tomato food relative to tomatoes: {}\n",
                    opt_num(c->min_ratio_to_tomato, "{:.2f}"));
  md += fmt::format("Mean non-tomato food relative to tomatoes: {}\n", opt_num(c->pooled_ratio_to_tomato, "{:.2f}"));
  return md;
}

std::string render_indications(const std::optional<IndicationsModelResult>& m, const std::string& why,
                               bool with_interaction, const ReportStamp& stamp) {
  std::string md = "# CoB12 against drug indications\n\n";
  md += stamp_line(stamp);
  if (!m) {
    md += fmt::format("Model undefined: {}\n", why);
    return md;
  }
  md += fmt::format(
      "Rank regression of CoB12 on askers, indication count and pain-indication count, weighted by "
      "R2_I{}. N = {}{}.\n\n",
      with_interaction ? ", with the product of indication and pain ranks" : "", m->n,
      m->degenerate ? " (design was near-singular; ridge fallback used)" : "");
  md += "| Feature | Slope | p |\n|---|---:|---:|\n";
  md += fmt::format("| Askers | {:.3f} | {} |\n", m->slope_askers, pvalue(m->p_askers));
  md += fmt::format("| Indications | {:.3f} | {} |\n", m->slope_indications, pvalue(m->p_indications));
  md += fmt::format("| Pain indications | {:.3f} | {} |\n", m->slope_pain, pvalue(m->p_pain));
  if (m->slope_interaction) {
    md += fmt::format("| Indications x pain | {:.3f} | {} |\n", *m->slope_interaction,
                      m->p_interaction ? pvalue(*m->p_interaction) : std::string("n/a"));
  }
  md += fmt::format("\nR2 = {:.3f}, model p = {}\n\n", m->r_squared, pvalue(m->model_p_value));
  md += fmt::format("Spearman indications vs askers: {}\n", correlation_cell(m->indications_vs_askers));
  md += fmt::format("Spearman pain indications vs askers: {}\n", correlation_cell(m->pain_vs_askers));
  return md;
}

std::string render_awareness(const AwarenessReport& a, const std::vector<CohortOutcome>& cohorts,
                             EstimateMode primary, const ReportStamp& stamp) {
  std::string md = "# B12 awareness and cohort intake\n\n";
  md += stamp_line(stamp);
  md += "| Quantity | Value |\n|---|---:|\n";
  md += fmt::format("| Users | {} |\n", a.users);
  md += fmt::format("| No B12 query of any kind | {} ({:.1f}%) |\n", a.unaware, 100.0 * a.unaware_fraction);
  md += fmt::format("| Asked about B12 deficiency | {} |\n", a.deficiency_aware);
  md += fmt::format("| Supplement queries among deficiency askers | {} ({}) |\n", a.supplement_within,
                    a.rate_within ? fmt::format("{:.2f}%", 100.0 * *a.rate_within) : "n/a");
  md += fmt::format("| Supplement queries among others | {} ({}) |\n", a.supplement_without,
                    a.rate_without ? fmt::format("{:.3f}%", 100.0 * *a.rate_without) : "n/a");
  md += fmt::format("| Rate ratio | {} |\n\n", opt_num(a.ratio, "{:.1f}"));
  md += "## Estimated B12 intake by deficiency awareness\n\n";
  md += "| Estimate | Primary | Aware N | Aware mean | Other N | Other mean | Relative difference | Ranksum p | Excluded |\n";
  md += "|---|---|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& c : cohorts) {
    const char* mark = c.mode == primary ? "yes" : "";
    if (!c.comparison) {
      md += fmt::format("| {} | {} | | | | | undefined: {} | | |\n", estimate_mode_name(c.mode), mark, c.why);
      continue;
    }
    const auto& r = *c.comparison;
    md += fmt::format("| {} | {} | {} | {:.4f} | {} | {:.4f} | {:.4f} | {} | {} |\n", estimate_mode_name(c.mode),
                      mark, r.n_a, r.mean_a, r.n_b, r.mean_b, r.relative_diff, pvalue(r.ranksum_p), r.excluded);
  }
  return md;
}

}  // namespace b12scope
