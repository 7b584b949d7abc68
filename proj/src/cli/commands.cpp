#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>

#include "fockshift/cli.hpp"
#include "fockshift/spectra.hpp"

namespace fockshift::cli {

namespace {

// Power iteration at tolerance 1e-10 on a Rayleigh quotient pins the norm to
// about 1e-6 relative; the weight-norm comparison uses that bound.
constexpr double kNormTol = 1e-6;
constexpr double kReconstructionTol = 1e-9;
constexpr std::size_t kMaxMuEntries = std::size_t{1} << 16;

Json complex_json(cplx x) { return Json::array({x.real(), x.imag()}); }

Json tuple_json(std::span<const cplx> t) {
  Json out = Json::array();
  for (const cplx& x : t) out.push_back(complex_json(x));
  return out;
}

Json certificate_json(const GrowthCertificate& c, int n) {
  return {{"letter", c.letter},
          {"stem", c.stem.str(n)},
          {"cycle", c.cycle.str(n)},
          {"stem_ratio", c.stem_ratio},
          {"cycle_ratio", c.cycle_ratio}};
}

Json condition_json(const Condition6Result& r) {
  Json out = {{"verdict", to_string(r.verdict)},
              {"depth", r.depth},
              {"value", r.value},
              {"argmax", std::to_string(r.argmax_letter) + ":" + r.argmax_word.str(r.alphabet)},
              {"method", r.method},
              {"automaton_states", r.automaton_states}};
  out["supremum"] = r.supremum ? Json(*r.supremum) : Json(nullptr);
  out["certificate"] = r.certificate ? certificate_json(*r.certificate, r.alphabet) : Json(nullptr);
  return out;
}

class CheckList {
 public:
  explicit CheckList(bool timings) : timings_(timings) {}

  /// Runs `body`, which fills the entry and returns it.
  void run(const std::string& name, const std::function<Json()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Json entry = body();
    Json ordered = {{"name", name}};
    for (const auto& [key, value] : entry.items()) ordered[key] = value;
    if (timings_) {
      ordered["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    if (ordered.value("status", "") == "fail") failed_ = true;
    checks_.push_back(std::move(ordered));
  }

  void skip(const std::string& name, const std::string& reason) {
    checks_.push_back({{"name", name}, {"status", "skipped"}, {"reason", reason}});
  }

  const Json& checks() const { return checks_; }
  bool failed() const { return failed_; }

 private:
  bool timings_;
  bool failed_ = false;
  Json checks_ = Json::array();
};

Json defect_entry(double defect, double tol, const std::string& witness) {
  return {{"status", defect <= tol ? "pass" : "fail"}, {"max_defect", defect}, {"tolerance", tol}, {"witness", witness}};
}

void emit_json(const RunConfig& config, const Json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (config.report) {
    write_atomic(*config.report, text);
  } else {
    out << text;
  }
}

const WeightSystem& require_weights(const RunConfig& config) {
  if (!config.weights) throw ConfigError("--config", "this command needs a weight-system config");
  return *config.weights;
}

int cmd_check(const RunConfig& config, std::ostream& out) {
  const auto& ws = require_weights(config);
  const int n = ws.alphabet();
  const int depth = config.depth;
  const double tol = config.tolerance;
  CheckList list(config.timings);

  const auto cond = condition6_sup(ws, depth);
  const bool diverging = cond.verdict == Verdict::Diverging;
  list.run("condition6", [&] {
    Json e = {{"status", diverging ? "finding" : "pass"}};
    e["detail"] = condition_json(cond);
    return e;
  });

  if (diverging) {
    list.run("left_cocycle", [&] {
      const auto r = check_left_cocycle(ws, depth);
      return defect_entry(r.max_defect, tol, r.witness);
    });
    list.skip("right_cocycle", "commutant weights unbounded: " + describe(cond));
  } else {
    const auto cocycles = check_cocycles(ws, MuSystem::commutant(ws), depth);
    list.run("left_cocycle", [&] { return defect_entry(cocycles.left.max_defect, tol, cocycles.left.witness); });
    list.run("right_cocycle", [&] { return defect_entry(cocycles.right.max_defect, tol, cocycles.right.witness); });
  }

  list.run("intertwining", [&] {
    const auto r = check_intertwining(ws, depth);
    return defect_entry(r.max_defect, tol, r.witness);
  });

  if (diverging) {
    list.skip("commutation", "commutant weights unbounded: " + describe(cond));
  } else {
    list.run("commutation", [&] {
      const auto r = commutation_defect(ws, depth);
      Json e = defect_entry(r.max_defect, tol,
                            "T_" + std::to_string(r.i) + " S_" + std::to_string(r.j) + " at " + r.witness.str(n));
      e["columns"] = r.columns;
      return e;
    });
  }

  list.run("norm", [&] {
    const auto entries = norm_check(ws, depth);
    double worst = 0.0;
    int letter = 1;
    Json rows = Json::array();
    for (const auto& e : entries) {
      rows.push_back({{"letter", e.letter},
                      {"power_norm", e.power_norm},
                      {"max_weight", e.max_weight},
                      {"gap", e.gap},
                      {"iterations", e.iterations},
                      {"converged", e.converged}});
      if (e.gap > worst || !e.converged) {
        worst = e.converged ? e.gap : std::max(worst, kNormTol * 2);
        letter = e.letter;
      }
    }
    Json e = defect_entry(worst, kNormTol, "T_" + std::to_string(letter));
    e["detail"] = rows;
    return e;
  });

  list.run("vacuum_kernel", [&] {
    const auto r = vacuum_kernel_check(ws, depth);
    const std::size_t dim = r.kernel_dim_svd ? *r.kernel_dim_svd : r.kernel_dim_structural;
    const bool ok = r.vacuum_in_kernel && dim == 1 && r.projection_defect <= tol;
    Json e = {{"status", ok ? "pass" : "fail"}, {"max_defect", r.projection_defect}, {"tolerance", tol}};
    e["detail"] = {{"kernel_dim_structural", r.kernel_dim_structural},
                   {"supports_disjoint", r.supports_disjoint},
                   {"vacuum_in_kernel", r.vacuum_in_kernel}};
    e["detail"]["kernel_dim_svd"] = r.kernel_dim_svd ? Json(*r.kernel_dim_svd) : Json(nullptr);
    return e;
  });

  Json report = {{"command", "check"}, {"config", config_echo(config)}};
  report["weights"] = {{"family", ws.family_name()}, {"n", n}};
  report["checks"] = list.checks();
  report["pass"] = !list.failed();
  emit_json(config, report, out);
  return list.failed() ? kExitCheckFailed : kExitPass;
}

FourierElement random_element(int n, int max_len, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  FourierElement a;
  a.n = n;
  const BasisEnumeration basis(n, max_len);
  for (std::size_t idx = 0; idx < basis.dimension(); ++idx) a.coeffs[basis.word(idx)] = cplx(normal(rng), normal(rng));
  return a;
}

double coeff_diff(const FourierElement& a, const FourierElement& b) {
  double worst = 0.0;
  for (const auto& [w, x] : a.coeffs) worst = std::max(worst, std::abs(x - b.at(w)));
  for (const auto& [w, x] : b.coeffs) worst = std::max(worst, std::abs(x - a.at(w)));
  return worst;
}

int cmd_commutant(const RunConfig& config, std::ostream& out) {
  const auto& ws = require_weights(config);
  const int n = ws.alphabet();
  const int depth = config.depth;
  const BasisEnumeration basis(n, depth - 1);
  if (basis.dimension() * static_cast<std::size_t>(n) > kMaxMuEntries) {
    throw DomainError("mu table up to depth " + std::to_string(depth) + " has more than 65536 entries");
  }
  const auto cond = condition6_sup(ws, depth);
  Json table = Json::object();
  for (std::size_t idx = 0; idx < basis.dimension(); ++idx) {
    const Word w = basis.word(idx);
    for (int i = 1; i <= n; ++i) table[std::to_string(i) + ":" + w.str(n)] = commutant_mu(ws, i, w);
  }
  CheckList list(config.timings);
  list.run("condition6", [&] {
    Json e = {{"status", cond.verdict == Verdict::Diverging ? "finding" : "pass"}};
    e["detail"] = condition_json(cond);
    return e;
  });
  if (cond.verdict == Verdict::Diverging) {
    list.skip("extract_roundtrip", "commutant weights unbounded: " + describe(cond));
  } else {
    const TruncatedFock space(n, depth);
    const auto mu = MuSystem::commutant(ws);
    std::mt19937_64 rng(kSeed);
    const int support = std::min(2, depth - 1);
    for (int trial = 0; trial < 3; ++trial) {
      const auto a = random_element(n, support, rng);
      list.run("extract_roundtrip_" + std::to_string(trial), [&] {
        const auto x = polynomial_operator(space, ws, a);
        const auto r = commutant_extract(x, mu);
        const double defect = std::max(coeff_diff(a, r.element), r.residual);
        Json e = defect_entry(defect, config.tolerance, r.residual_witness.str(n));
        e["detail"] = {{"coefficient_error", coeff_diff(a, r.element)},
                       {"residual", r.residual},
                       {"precheck_defect", r.precheck.max_defect}};
        return e;
      });
    }
  }
  Json report = {{"command", "commutant"}, {"config", config_echo(config)}};
  report["mu"] = table;
  report["checks"] = list.checks();
  report["pass"] = !list.failed();
  emit_json(config, report, out);
  return list.failed() ? kExitCheckFailed : kExitPass;
}

int cmd_region(const RunConfig& config, std::ostream& out) {
  const auto& ws = require_weights(config);
  if (!config.grid) throw ConfigError("--grid", "region needs a grid lo:hi:step");
  const auto rows = region_sample(ws, *config.grid, config.depth, config.epsilon);
  const std::string csv = region_csv(ws.alphabet(), rows);
  if (config.out) {
    write_atomic(*config.out, csv);
  } else {
    out << csv;
  }
  if (config.report) {
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& row : rows) ++counts[static_cast<int>(row.verdict)];
    Json report = {{"command", "region"}, {"config", config_echo(config)}};
    report["points"] = rows.size();
    report["inside"] = counts[static_cast<int>(Membership::Inside)];
    report["outside"] = counts[static_cast<int>(Membership::Outside)];
    report["inconclusive"] = counts[static_cast<int>(Membership::Inconclusive)];
    report["pass"] = true;
    write_atomic(*config.report, report.dump(2) + "\n");
  }
  return kExitPass;
}

int cmd_cesaro(const RunConfig& config, std::ostream& out) {
  const auto& ws = require_weights(config);
  if (!config.coeffs_doc) throw ConfigError("--coeffs", "cesaro needs a Fourier coefficient file");
  const int n = ws.alphabet();
  const auto a = parse_fourier(*config.coeffs_doc, n);
  const int depth = config.depth;
  if (static_cast<int>(a.max_length()) > depth) throw DomainError("coefficients reach beyond depth");
  const std::vector<int> ks = config.k.empty() ? std::vector<int>{2, 4, 8} : config.k;
  const TruncatedFock space(n, depth);
  const auto x = polynomial_operator(space, ws, a);
  CheckList list(config.timings);
  for (int k : ks) {
    list.run("cesaro_k" + std::to_string(k), [&] {
      const auto diff = cesaro_sum(x, k) - pk_polynomial(space, ws, a, k);
      double worst = 0.0;
      Word witness;
      const int top = depth - k;
      if (top >= 0) {
        for (std::size_t c = 0; c < space.levels_end(top); ++c) {
          double sq = 0.0;
          for (const auto& [row, value] : diff.column(c)) sq += std::norm(value);
          if (std::sqrt(sq) > worst) {
            worst = std::sqrt(sq);
            witness = space.word(c);
          }
        }
      }
      Json e = defect_entry(worst, config.tolerance, witness.str(n));
      e["columns_checked"] = top >= 0 ? space.levels_end(top) : 0;
      return e;
    });
  }
  list.run("extract_roundtrip", [&] {
    const auto r = commutant_extract(x, MuSystem::commutant(ws));
    const double defect = std::max(coeff_diff(a, r.element), r.residual);
    return defect_entry(defect, config.tolerance, r.residual_witness.str(n));
  });
  Json report = {{"command", "cesaro"}, {"config", config_echo(config)}};
  report["checks"] = list.checks();
  report["pass"] = !list.failed();
  emit_json(config, report, out);
  return list.failed() ? kExitCheckFailed : kExitPass;
}

Json spectra_right(const std::vector<cplx>& lambda, const RunConfig& config) {
  const auto r = right_membership(lambda, config.depth);
  Json e = {{"lambda", tuple_json(lambda)}, {"mode", "right"}, {"verdict", to_string(r.verdict)}};
  bool pass = true;
  if (r.verdict == SpectrumVerdict::InSpectrum) {
    e["defects"] = {{"eigen_residual", *r.eigen_residual}};
    pass = *r.eigen_residual <= config.tolerance;
    Json coeffs = Json::object();
    const TruncatedFock space(static_cast<int>(lambda.size()), config.depth);
    const int shown = std::min(config.depth, 2);
    for (std::size_t idx = 0; idx < space.levels_end(shown); ++idx) {
      coeffs[space.word(idx).str(space.alphabet())] = complex_json(r.eigenvector->coeffs[idx]);
    }
    e["witness"] = {{"eigenvector_levels_shown", shown}, {"eigenvector", coeffs}};
  } else if (r.verdict == SpectrumVerdict::NotInSpectrum) {
    e["defects"] = {{"low", r.inverse_defect->low},
                    {"top", r.inverse_defect->top},
                    {"predicted_top", std::pow(1.0 / r.norm, config.depth)}};
    pass = r.inverse_defect->low <= config.tolerance;
    std::vector<cplx> inverse;
    for (const cplx& x : lambda) inverse.push_back(std::conj(x) / (r.norm * r.norm));
    e["witness"] = {{"series_point", tuple_json(inverse)}};
  } else {
    e["defects"] = Json::object();
    e["witness"] = {{"norm", r.norm}};
  }
  e["pass"] = pass;
  return e;
}

Json spectra_resolvent(const std::vector<cplx>& lambda, const RunConfig& config) {
  const auto r = resolvent_check(lambda, config.depth);
  Json e = {{"lambda", tuple_json(lambda)}, {"mode", "resolvent"}, {"verdict", "invertible"}};
  e["defects"] = {{"low", r.defect.low}, {"top", r.defect.top}, {"predicted_top", r.predicted_top}};
  bool decays = r.predicted_top > 0.0 ? (r.defect.top <= 2.0 * r.predicted_top && r.defect.top >= 0.5 * r.predicted_top)
                                      : r.defect.top <= config.tolerance;
  e["witness"] = Json(nullptr);
  e["pass"] = r.defect.low <= config.tolerance && decays;
  return e;
}

Json spectra_left(const std::vector<cplx>& lambda, const RunConfig& config) {
  Json e = {{"lambda", tuple_json(lambda)}, {"mode", "left"}};
  if (lambda.size() != 2) throw DomainError("left growth certificates are implemented for n = 2 only");
  double norm_sq = 0.0;
  for (const cplx& x : lambda) norm_sq += std::norm(x);
  if (std::abs(lambda[0]) < 1.0 && std::abs(lambda[1]) < 1.0 && norm_sq > 1.0) {
    e["verdict"] = "unknown";
    e["defects"] = Json::object();
    e["witness"] = Json(nullptr);
    e["pass"] = true;
    return e;
  }
  const int k_max = config.k.empty() ? 100 : config.k.front();
  const auto t = left_growth_certificate(lambda, k_max, config.assumed);
  Json rows = Json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    rows.push_back({{"k", t.rows[i].k}, {"word", t.rows[i].word.str(2)}, {"bound", t.rows[i].bound}});
    if (i > 0 && t.rows[i].bound < t.rows[i - 1].bound) monotone = false;
  }
  e["verdict"] = "in_left_spectrum";
  e["defects"] = Json::object();
  e["witness"] = {{"component", t.component}, {"rule", t.rule}, {"assumed", t.assumed}, {"rows", rows}};
  e["pass"] = monotone;
  return e;
}

Json spectra_zero(const RunConfig& config) {
  CoeffMap eta1;
  CoeffMap eta2;
  if (config.coeffs_doc) {
    const auto& doc = *config.coeffs_doc;
    if (!doc.is_object()) throw ConfigError("$", "expected an object with eta1, eta2");
    for (const auto& [key, value] : doc.items()) {
      if (key != "eta1" && key != "eta2") throw ConfigError("$." + key, "unknown field");
    }
    if (doc.contains("eta1")) eta1 = parse_coeff_map(doc.at("eta1"), 2, "$.eta1");
    if (doc.contains("eta2")) eta2 = parse_coeff_map(doc.at("eta2"), 2, "$.eta2");
  }
  const auto r = zero_left_inverses(eta1, eta2, config.depth, kSeed);
  Json e = {{"lambda", tuple_json(std::vector<cplx>{0.0, 0.0})}, {"mode", "zero"}, {"verdict", "left_invertible"}};
  e["defects"] = {{"relation", r.relation_defect},
                  {"reconstruction", r.reconstruction_residual},
                  {"solve", r.solve_residual}};
  e["witness"] = {{"form", "A_i = L_i^* + eta_i xi_e^*"}};
  e["pass"] = r.relation_defect <= config.tolerance && r.reconstruction_residual <= kReconstructionTol;
  return e;
}

int cmd_spectra(const RunConfig& config, std::ostream& out) {
  int n = config.weights ? config.weights->alphabet() : 0;
  Json results = Json::array();
  if (config.mode == "zero") {
    results.push_back(spectra_zero(config));
  } else {
    if (config.lambdas.empty()) throw ConfigError("--lambda", "spectra mode " + config.mode + " needs lambda values");
    if (n == 0) n = static_cast<int>(config.lambdas.front().size());
    for (const auto& lambda : config.lambdas) {
      if (static_cast<int>(lambda.size()) != n) {
        throw ConfigError("--lambda", "expected " + std::to_string(n) + " components, got " +
                                          std::to_string(lambda.size()));
      }
      if (config.mode == "right") {
        results.push_back(spectra_right(lambda, config));
      } else if (config.mode == "resolvent") {
        results.push_back(spectra_resolvent(lambda, config));
      } else if (config.mode == "left") {
        results.push_back(spectra_left(lambda, config));
      } else {
        throw ConfigError("--mode", "unknown spectra mode \"" + config.mode + "\" (right, resolvent, left, zero)");
      }
    }
  }
  bool pass = true;
  for (const auto& r : results) pass = pass && r.at("pass").get<bool>();
  Json report = {{"command", "spectra"}, {"config", config_echo(config)}};
  report["operator"] = "unweighted left creation tuple";
  if (config.weights && !config.weights->is_unweighted()) {
    report["note"] =
        "spectra modes act on the unweighted tuple; for weighted shifts only eigen Inside verdicts give right "
        "spectrum points";
  }
  report["results"] = results;
  report["pass"] = pass;
  emit_json(config, report, out);
  return pass ? kExitPass : kExitCheckFailed;
}

}  // namespace

int run_command(const std::string& verb, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (verb == "check") return cmd_check(config, out);
    if (verb == "commutant") return cmd_commutant(config, out);
    if (verb == "region") return cmd_region(config, out);
    if (verb == "cesaro") return cmd_cesaro(config, out);
    if (verb == "spectra") return cmd_spectra(config, out);
    err << "error: unknown command \"" << verb << "\"\n";
    return kExitPrecondition;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitPrecondition;
}

}  // namespace fockshift::cli
