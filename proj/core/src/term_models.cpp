#include "b12scope/term_models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "b12scope/csv.hpp"
#include "b12scope/error.hpp"
#include "b12scope/numeric.hpp"
#include "b12scope/parallel.hpp"

namespace b12scope {

std::string_view cohort_filter_name(CohortFilter f) {
  return f == CohortFilter::Unaware ? "unaware" : "all";
}
std::optional<CohortFilter> parse_cohort_filter(std::string_view s) {
  if (s == "unaware") return CohortFilter::Unaware;
  if (s == "all") return CohortFilter::All;
  return std::nullopt;
}
std::string_view correlation_method_name(CorrelationMethod m) {
  return m == CorrelationMethod::Pearson ? "pearson" : "spearman";
}
std::optional<CorrelationMethod> parse_correlation_method(std::string_view s) {
  if (s == "pearson") return CorrelationMethod::Pearson;
  if (s == "spearman") return CorrelationMethod::Spearman;
  return std::nullopt;
}
std::string_view model_kind_name(TermModelKind k) {
  return k == TermModelKind::Linear ? "linear" : "logistic";
}
std::optional<TermModelKind> parse_model_kind(std::string_view s) {
  if (s == "linear") return TermModelKind::Linear;
  if (s == "logistic") return TermModelKind::Logistic;
  return std::nullopt;
}

std::vector<TermSelection> select_modeled_terms(const ProfileStore& store, const TermLexicon& lexicon,
                                                std::size_t threshold) {
  std::vector<TermSelection> out;
  for (const auto& e : lexicon.entries) {
    std::size_t n = 0;
    for (const auto& p : store.users) n += p.has_term(e.term) ? 1 : 0;
    if (n >= threshold) out.push_back({e.term, lexicon.kind, e.category, n});
  }
  return out;
}

std::optional<double> cob12(const FoodVector& coefficients, const NutrientTable& table,
                            CorrelationMethod method) {
  try {
    const auto& v = table.values();
    return method == CorrelationMethod::Pearson ? stats::pearson(coefficients, v).coefficient
                                                : stats::spearman(coefficients, v).coefficient;
  } catch (const StatError&) {
    return std::nullopt;
  }
}

namespace {

constexpr std::size_t kMinUsers = kFoodCount + 1;

struct Design {
  std::vector<const UserProfile*> users;
  stats::Matrix x;
};

Design build_design(const ProfileStore& store, CohortFilter filter) {
  Design d;
  for (const auto& p : store.users) {
    if (filter == CohortFilter::Unaware && p.b12_aware()) continue;
    d.users.push_back(&p);
  }
  d.x = stats::Matrix(d.users.size(), kFoodCount);
  for (std::size_t i = 0; i < d.users.size(); ++i) {
    for (std::size_t f = 0; f < kFoodCount; ++f) {
      d.x(i, f) = static_cast<double>(d.users[i]->food_counts[f]);
    }
  }
  return d;
}

TermModelResult fit_on_design(const Design& d, const ProfileStore& store, const TermSelection& term,
                              const NutrientTable& table, const FitOptions& options) {
  TermModelResult r;
  r.term = term.term;
  r.kind = term.kind;
  r.category = term.category;
  r.n_askers = 0;
  for (const auto& p : store.users) r.n_askers += p.has_term(term.term) ? 1 : 0;
  r.n_users_fit = d.users.size();

  std::vector<double> y(d.users.size());
  for (std::size_t i = 0; i < d.users.size(); ++i) {
    y[i] = d.users[i]->has_term(term.term) ? 1.0 : 0.0;
    r.n_positive += y[i] > 0.0 ? 1 : 0;
  }
  auto fail = [&](std::string why) {
    r.degenerate = true;
    r.reason = std::move(why);
    return r;
  };
  if (d.users.size() < kMinUsers) {
    return fail(fmt::format("only {} users after filtering", d.users.size()));
  }
  if (r.n_positive == 0) return fail("no askers after filtering");
  if (r.n_positive == d.users.size()) return fail("every fitted user asked the term");

  stats::RegressionResult fit;
  try {
    fit = options.kind == TermModelKind::Linear ? stats::ols_fit(d.x, y) : stats::logistic_fit(d.x, y);
  } catch (const StatError& e) {
    return fail(e.what());
  }
  std::copy(fit.coefficients.begin(), fit.coefficients.end(), r.coefficients.begin());
  r.intercept = fit.intercept;
  r.r2_i = fit.r_squared;
  r.cob12_pearson = cob12(r.coefficients, table, CorrelationMethod::Pearson);
  r.cob12_spearman = cob12(r.coefficients, table, CorrelationMethod::Spearman);
  r.cob12 = options.method == CorrelationMethod::Pearson ? r.cob12_pearson : r.cob12_spearman;
  if (fit.degenerate) return fail("rank-deficient design (some food never searched)");
  if (!r.cob12) return fail("constant coefficient vector");
  return r;
}

}  // namespace

TermModelResult fit_term_model(const ProfileStore& store, const TermSelection& term,
                               const NutrientTable& table, const FitOptions& options) {
  const auto d = build_design(store, options.filter);
  return fit_on_design(d, store, term, table, options);
}

std::vector<TermModelResult> fit_all_terms(const ProfileStore& store,
                                           const std::vector<TermSelection>& terms,
                                           const NutrientTable& table, const FitOptions& options) {
  const auto d = build_design(store, options.filter);
  std::vector<TermModelResult> out(terms.size());
  parallel_for(terms.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = fit_on_design(d, store, terms[i], table, options);
  });
  return out;
}

std::vector<TermModelResult> rank_terms(std::vector<TermModelResult> results) {
  std::stable_sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    if (a.degenerate != b.degenerate) return !a.degenerate;
    if (a.degenerate) return a.term < b.term;
    if (a.r2_i != b.r2_i) return a.r2_i > b.r2_i;
    if (a.n_askers != b.n_askers) return a.n_askers > b.n_askers;
    return a.term < b.term;
  });
  return results;
}

namespace {

std::optional<stats::CorrelationResult> try_spearman(const std::vector<double>& x,
                                                     const std::vector<double>& y) {
  try {
    return stats::spearman(x, y);
  } catch (const StatError&) {
    return std::nullopt;
  }
}

std::vector<TermModelResult> usable(const std::vector<TermModelResult>& rs, std::size_t& degenerate) {
  std::vector<TermModelResult> out;
  degenerate = 0;
  for (const auto& r : rs) {
    if (r.degenerate || !r.cob12) {
      ++degenerate;
    } else {
      out.push_back(r);
    }
  }
  return rank_terms(std::move(out));
}

}  // namespace

TargetControlComparison target_vs_control(const std::vector<TermModelResult>& targets,
                                          const std::vector<TermModelResult>& controls,
                                          std::size_t top_k) {
  TargetControlComparison c;
  c.top_k = top_k;
  const auto t = usable(targets, c.degenerate_targets);
  const auto k = usable(controls, c.degenerate_controls);
  if (t.empty()) throw StatError("no usable target term models");
  if (k.empty()) throw StatError("no usable control term models");

  c.targets_used = std::min(top_k, t.size());
  c.controls_used = std::min(top_k, k.size());
  std::vector<double> r2t, r2c;
  for (std::size_t i = 0; i < c.targets_used; ++i) r2t.push_back(t[i].r2_i);
  for (std::size_t i = 0; i < c.controls_used; ++i) r2c.push_back(k[i].r2_i);
  c.median_r2_target = stats::median(r2t);
  c.median_r2_control = stats::median(r2c);
  if (c.median_r2_control > 0.0) c.median_r2_ratio = c.median_r2_target / c.median_r2_control;
  c.r2_ranksum_p = stats::ranksum(r2t, r2c).p_value;

  auto column = [](const std::vector<TermModelResult>& rs, auto get) {
    std::vector<double> v;
    for (const auto& r : rs) v.push_back(get(r));
    return v;
  };
  const auto t_r2 = column(t, [](const auto& r) { return r.r2_i; });
  const auto t_cob = column(t, [](const auto& r) { return *r.cob12; });
  const auto t_askers = column(t, [](const auto& r) { return static_cast<double>(r.n_askers); });
  const auto k_r2 = column(k, [](const auto& r) { return r.r2_i; });
  const auto k_cob = column(k, [](const auto& r) { return *r.cob12; });
  c.r2_vs_askers_target = try_spearman(t_r2, t_askers);
  c.r2_vs_cob12_target = try_spearman(t_r2, t_cob);
  c.r2_vs_cob12_control = try_spearman(k_r2, k_cob);
  c.mean_cob12_target = stats::mean(t_cob);
  c.mean_cob12_control = stats::mean(k_cob);
  c.cob12_ranksum_p = stats::ranksum(t_cob, k_cob).p_value;
  for (double v : t_cob) c.positive_cob12_target += v > 0.0 ? 1 : 0;
  for (double v : k_cob) c.positive_cob12_control += v > 0.0 ? 1 : 0;

  for (std::size_t f = 0; f < kFoodCount; ++f) {
    CompensatedSum s;
    for (const auto& r : t) s.add(std::abs(r.coefficients[f]));
    c.mean_abs_coef_target[f] = s.value() / static_cast<double>(t.size());
  }
  const double tomato = c.mean_abs_coef_target[index_of(FoodItem::Tomatoes)];
  if (tomato > 0.0) {
    double lo = INFINITY;
    CompensatedSum others;
    for (std::size_t f = 0; f < kFoodCount; ++f) {
      if (f == index_of(FoodItem::Tomatoes)) continue;
      lo = std::min(lo, c.mean_abs_coef_target[f] / tomato);
      others.add(c.mean_abs_coef_target[f]);
    }
    c.min_ratio_to_tomato = lo;
    c.pooled_ratio_to_tomato = others.value() / static_cast<double>(kFoodCount - 1) / tomato;
  }
  return c;
}

IndicationsModelResult indications_model(const std::vector<TermModelResult>& results,
                                         const IndicationsTable& indications, bool with_interaction) {
  IndicationsModelResult out;

  std::vector<double> all_askers, all_ind, all_pain;
  std::vector<double> askers, ind, pain, y, w;
  for (const auto& r : results) {
    auto it = indications.find(r.term);
    if (it == indications.end()) continue;
    all_askers.push_back(static_cast<double>(r.n_askers));
    all_ind.push_back(static_cast<double>(it->second.n_indications));
    all_pain.push_back(static_cast<double>(it->second.n_pain_indications));
    if (r.degenerate || !r.cob12) continue;
    askers.push_back(static_cast<double>(r.n_askers));
    ind.push_back(static_cast<double>(it->second.n_indications));
    pain.push_back(static_cast<double>(it->second.n_pain_indications));
    y.push_back(*r.cob12);
    w.push_back(r.r2_i);
  }
  out.n_spearman = all_askers.size();
  out.indications_vs_askers = try_spearman(all_ind, all_askers);
  out.pain_vs_askers = try_spearman(all_pain, all_askers);

  out.n = y.size();
  if (out.n < kIndicationsMinRows) {
    throw StatError(fmt::format("indications model needs at least {} drug terms with a fitted model "
                                "and indications data; found {}",
                                kIndicationsMinRows, out.n));
  }
  const std::size_t k = with_interaction ? 4 : 3;
  stats::Matrix x(out.n, k);
  x.set_column(0, askers);
  x.set_column(1, ind);
  x.set_column(2, pain);
  if (with_interaction) {
    const auto ri = stats::rank_transform(ind);
    const auto rp = stats::rank_transform(pain);
    std::vector<double> prod(out.n);
    for (std::size_t i = 0; i < out.n; ++i) prod[i] = ri[i] * rp[i];
    x.set_column(3, prod);
  }
  const auto fit = stats::rank_regression(x, y, w);
  out.slope_askers = fit.coefficients[0];
  out.slope_indications = fit.coefficients[1];
  out.slope_pain = fit.coefficients[2];
  out.p_askers = fit.p_values[0];
  out.p_indications = fit.p_values[1];
  out.p_pain = fit.p_values[2];
  if (with_interaction) {
    out.slope_interaction = fit.coefficients[3];
    out.p_interaction = fit.p_values[3];
  }
  out.r_squared = fit.r_squared;
  out.model_p_value = fit.model_p_value;
  out.degenerate = fit.degenerate;
  return out;
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }
std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<TermModelResult>& results,
                       const std::vector<std::string>& header_comments) {
  for (const auto& c : header_comments) out << "# " << c << '\n';
  out << "term,kind,category,n_askers,n_users_fit,n_positive,r2_i,cob12,cob12_pearson,"
         "cob12_spearman,intercept";
  for (auto f : kFoodOrder) out << ",coef_" << food_name(f);
  out << ",degenerate,reason\n";
  for (const auto& r : results) {
    out << csv_field(r.term) << ',' << term_kind_name(r.kind) << ',' << csv_field(category_name(r.category))
        << ',' << r.n_askers << ',' << r.n_users_fit << ',' << r.n_positive << ',' << num(r.r2_i) << ','
        << opt_num(r.cob12) << ',' << opt_num(r.cob12_pearson) << ',' << opt_num(r.cob12_spearman) << ','
        << num(r.intercept);
    for (double c : r.coefficients) out << ',' << num(c);
    out << ',' << (r.degenerate ? 1 : 0) << ',' << csv_field(r.reason) << '\n';
  }
}

std::vector<TermModelResult> read_results_csv(std::istream& in) {
  const auto table = read_csv(in);
  const std::string src = "results";
  auto col = [&](std::string_view name) { return table.require_column(name, src); };
  const auto c_term = col("term"), c_kind = col("kind"), c_cat = col("category"),
             c_ask = col("n_askers"), c_fit = col("n_users_fit"), c_pos = col("n_positive"),
             c_r2 = col("r2_i"), c_cob = col("cob12"), c_cp = col("cob12_pearson"),
             c_cs = col("cob12_spearman"), c_int = col("intercept"), c_deg = col("degenerate"),
             c_reason = col("reason");
  std::array<std::size_t, kFoodCount> c_coef{};
  for (std::size_t f = 0; f < kFoodCount; ++f) {
    c_coef[f] = col(fmt::format("coef_{}", food_name(kFoodOrder[f])));
  }
  std::vector<TermModelResult> out;
  for (const auto& row : table.rows) {
    TermModelResult r;
    try {
      r.term = row[c_term];
      const auto kind = parse_term_kind(row[c_kind]);
      const auto cat = parse_category(row[c_cat]);
      if (!kind || !cat) throw FormatError(fmt::format("bad kind/category for '{}'", r.term));
      r.kind = *kind;
      r.category = *cat;
      r.n_askers = std::stoull(row[c_ask]);
      r.n_users_fit = std::stoull(row[c_fit]);
      r.n_positive = std::stoull(row[c_pos]);
      r.r2_i = std::stod(row[c_r2]);
      r.cob12 = parse_opt(row[c_cob]);
      r.cob12_pearson = parse_opt(row[c_cp]);
      r.cob12_spearman = parse_opt(row[c_cs]);
      r.intercept = std::stod(row[c_int]);
      for (std::size_t f = 0; f < kFoodCount; ++f) r.coefficients[f] = std::stod(row[c_coef[f]]);
      r.degenerate = row[c_deg] == "1";
      r.reason = row[c_reason];
    } catch (const std::invalid_argument&) {
      throw FormatError(fmt::format("results: unparseable number in row for '{}'", row[c_term]));
    } catch (const std::out_of_range&) {
      throw FormatError(fmt::format("results: number out of range in row for '{}'", row[c_term]));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TermModelResult> read_results_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  try {
    return read_results_csv(in);
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace b12scope
