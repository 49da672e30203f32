// Command-line surface for the structured determinant library.
//
// Subcommands:
//   compute   closed-form determinant breakdown of an instance file
//   verify    closed form vs. materialized brute force, file or generated
//   expand    permutation-expansion checks of the underlying identity
//   generate  write a seeded random instance as JSON
//   bench     closed form vs. dense timings over a size grid
//
// Exit codes: 0 success/pass, 1 verification failure, 2 parse error,
// 3 validation error, 4 resource limit exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "krondet/bench.hpp"
#include "krondet/closed_form.hpp"
#include "krondet/dense_oracle.hpp"
#include "krondet/generator.hpp"
#include "krondet/instance_json.hpp"
#include "krondet/proof_expansion.hpp"
#include "krondet/verify.hpp"

namespace {

using nlohmann::json;
using namespace krondet;

constexpr const char* kDenseCapEnvVar = "KRONDET_DENSE_CAP";

// Cap precedence: --cap flag, then KRONDET_DENSE_CAP, then the default.
std::size_t resolve_dense_cap(const std::optional<std::size_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kDenseCapEnvVar)) {
    try {
      const long long v = std::stoll(env);
      if (v < 1) throw std::invalid_argument("nonpositive");
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw validation_error(std::string(kDenseCapEnvVar) +
                             " must be a positive integer");
    }
  }
  return kDefaultDenseCap;
}

json sld_json(const SignLogDet& d) {
  json j;
  j["sign"] = d.sign();
  if (d.is_zero()) {
    j["log_abs"] = nullptr;
  } else {
    j["log_abs"] = d.log_abs();
  }
  return j;
}

std::string sld_text(const SignLogDet& d) { return d.describe(); }

template <class Fn>
int dispatch_mode(ScalarMode mode, Fn&& fn) {
  if (mode == ScalarMode::kExact) {
    return fn(mpq_class());
  }
  return fn(double());
}

struct GeneratorSpec {
  int n = 0;
  int f = 0;
  std::uint64_t seed = 0;
  std::string profile = "uniform";
};

// ---------------------------------------------------------------- compute

struct ComputeOpts {
  std::string file;
  std::string mode = "float";
  bool as_json = false;
};

template <class T>
int run_compute_typed(const ComputeOpts& opt) {
  const auto inst = load_instance<T>(opt.file);
  const ClosedFormBreakdown bd = closed_form_det(inst);
  const ScalarWithFlags<T> value = closed_form_value(inst);
  const std::vector<std::string> zeros = zero_factors(bd);

  if (opt.as_json) {
    json out;
    out["N"] = inst.n();
    out["F"] = inst.f();
    out["mode"] = mode_name(scalar_traits<T>::mode);
    json a = json::array();
    for (const auto& d : bd.det_a) a.push_back(sld_json(d));
    out["det_A"] = std::move(a);
    out["det_X"] = sld_json(bd.det_x);
    out["det_Y"] = sld_json(bd.det_y);
    out["total"] = sld_json(bd.total);
    if constexpr (scalar_traits<T>::is_exact) {
      out["value"] = value.value.get_str();
    } else {
      out["value"] = value.value;
    }
    out["overflow"] = value.overflow;
    out["underflow"] = value.underflow;
    out["zero_factors"] = zeros;
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  std::cout << "instance: N=" << inst.n() << " F=" << inst.f()
            << " dim=" << inst.dim()
            << " mode=" << mode_name(scalar_traits<T>::mode) << "\n";
  for (std::size_t k = 0; k < bd.det_a.size(); ++k) {
    std::cout << "det(A[" << (k + 1) << "]): " << sld_text(bd.det_a[k]) << "\n";
  }
  std::cout << "det(X):   " << sld_text(bd.det_x) << "\n";
  std::cout << "det(Y):   " << sld_text(bd.det_y) << "\n";
  std::cout << "total:    " << sld_text(bd.total) << "\n";
  std::cout << "value:    " << scalar_traits<T>::to_string(value.value);
  if (value.overflow) std::cout << " [overflow]";
  if (value.underflow) std::cout << " [underflow]";
  std::cout << "\n";
  if (!zeros.empty()) {
    std::cout << "zero factors:";
    for (const auto& z : zeros) std::cout << " " << z;
    std::cout << "\n";
  }
  return 0;
}

int run_compute(const ComputeOpts& opt) {
  return dispatch_mode(parse_mode(opt.mode), [&](auto tag) {
    return run_compute_typed<decltype(tag)>(opt);
  });
}

// ----------------------------------------------------------------- verify

struct VerifyOpts {
  std::string file;
  GeneratorSpec gen;
  int count = 1;
  std::string mode = "float";
  std::optional<std::size_t> cap;
  bool corrupt = false;
  bool as_json = false;
};

json report_json(const VerificationReport& rep) {
  json j;
  j["mode"] = mode_name(rep.mode);
  j["closed"] = sld_json(rep.closed_total);
  j["dense"] = sld_json(rep.dense_total);
  j["closed_value"] = rep.closed_value;
  j["dense_value"] = rep.dense_value;
  j["sign_match"] = rep.sign_match;
  if (std::isfinite(rep.log_diff)) {
    j["log_diff"] = rep.log_diff;
  } else {
    j["log_diff"] = "inf";
  }
  if (std::isfinite(rep.abs_diff)) {
    j["abs_diff"] = rep.abs_diff;
  } else {
    j["abs_diff"] = "inf";
  }
  if (rep.mode == ScalarMode::kExact) j["exact_equal"] = rep.exact_equal;
  j["corrupted"] = rep.corrupted;
  j["pass"] = rep.pass;
  return j;
}

void print_report_line(const std::string& label,
                       const VerificationReport& rep) {
  std::cout << label << (rep.pass ? " PASS" : " FAIL") << "  closed["
            << sld_text(rep.closed_total) << "]  dense["
            << sld_text(rep.dense_total) << "]  log_diff=" << rep.log_diff
            << "  abs_diff=" << rep.abs_diff << "\n";
}

template <class T>
int run_verify_typed(const VerifyOpts& opt) {
  VerifyOptions vopt;
  vopt.dense_cap = resolve_dense_cap(opt.cap);
  vopt.corrupt = opt.corrupt;

  std::vector<VerificationReport> reports;
  json out = json::array();
  bool all_pass = true;

  if (!opt.file.empty()) {
    const auto inst = load_instance<T>(opt.file);
    const auto rep = verify_instance(inst, vopt);
    all_pass = rep.pass;
    if (opt.as_json) {
      out.push_back(report_json(rep));
    } else {
      print_report_line("verify " + opt.file + ":", rep);
    }
  } else {
    if (opt.gen.n < 1 || opt.gen.f < 1) {
      throw validation_error("verify needs an instance file or --n and --f");
    }
    const Profile profile = parse_profile(opt.gen.profile);
    for (int i = 0; i < opt.count; ++i) {
      const std::uint64_t seed = opt.gen.seed + static_cast<std::uint64_t>(i);
      const auto inst = random_instance<T>(opt.gen.n, opt.gen.f, seed, profile);
      const auto rep = verify_instance(inst, vopt);
      all_pass = all_pass && rep.pass;
      if (opt.as_json) {
        json jr = report_json(rep);
        jr["seed"] = seed;
        jr["N"] = opt.gen.n;
        jr["F"] = opt.gen.f;
        jr["profile"] = opt.gen.profile;
        out.push_back(std::move(jr));
      } else {
        std::ostringstream label;
        label << "verify N=" << opt.gen.n << " F=" << opt.gen.f
              << " seed=" << seed << " profile=" << opt.gen.profile << ":";
        print_report_line(label.str(), rep);
      }
    }
  }

  if (opt.as_json) {
    json wrapper;
    wrapper["reports"] = std::move(out);
    wrapper["pass"] = all_pass;
    std::cout << wrapper.dump(2) << "\n";
  } else if (opt.count > 1) {
    std::cout << (all_pass ? "all passed" : "FAILURES present") << "\n";
  }
  return all_pass ? 0 : 1;
}

int run_verify(const VerifyOpts& opt) {
  return dispatch_mode(parse_mode(opt.mode), [&](auto tag) {
    return run_verify_typed<decltype(tag)>(opt);
  });
}

// ----------------------------------------------------------------- expand

struct ExpandOpts {
  GeneratorSpec gen{.n = 2, .f = 2, .seed = 0, .profile = "integer_small"};
  std::string checks = "all";
  std::string mode = "exact";  // the identity checks are exact by default
  std::uint64_t limit = kDefaultTupleLimit;
  bool as_json = false;
};

struct CheckResult {
  std::string name;
  bool pass = true;
  std::uint64_t count = 0;  // permutations or tuples visited
  std::string note;
};

template <class T>
CheckResult check_detb(const KronRankOneInstance<T>& inst) {
  CheckResult r;
  r.name = "detb";
  const auto perms = all_permutations(inst.n());
  r.count = perms.size();
  for (const Permutation& g : perms) {
    try {
      b_columns_det(inst, g);
    } catch (const verification_error& e) {
      r.pass = false;
      r.note = e.what();
      break;
    }
  }
  return r;
}

template <class T>
CheckResult check_cdiag(const KronRankOneInstance<T>& inst,
                        std::uint64_t limit) {
  CheckResult r;
  r.name = "cdiag";
  GammaEnumeration en(inst.n(), inst.f(), limit);
  r.count = en.count();
  en.for_each([&](const PermutationTuple& tuple, std::uint64_t pos) {
    if (!r.pass) return;
    const auto contib = c_diag_det(inst, tuple);
    const DenseMatrix<T> c = assemble_c_diag(inst, tuple);
    const T oracle = (c.rows() <= kLeibnizSizeLimit) ? leibniz_det(c)
                                                     : det_value(c);
    if (!detail::values_agree(contib.total, oracle)) {
      r.pass = false;
      r.note = "tuple #" + std::to_string(pos) + " " + tuple.describe();
    }
  });
  return r;
}

template <class T>
CheckResult check_sumdiag(const KronRankOneInstance<T>& inst,
                          std::uint64_t limit) {
  CheckResult r;
  r.name = "sumdiag";
  r.count = GammaEnumeration(inst.n(), inst.f(), limit).count();
  try {
    sum_block_diagonal(inst, limit);
  } catch (const verification_error& e) {
    r.pass = false;
    r.note = e.what();
  }
  return r;
}

template <class T>
CheckResult check_ypower(const KronRankOneInstance<T>& inst,
                         std::uint64_t limit) {
  CheckResult r;
  r.name = "ypower";
  r.count = GammaEnumeration(inst.n(), inst.f(), limit).count();
  try {
    y_power_identity(inst.y(), inst.f(), limit);
  } catch (const verification_error& e) {
    r.pass = false;
    r.note = e.what();
  }
  return r;
}

template <class T>
CheckResult check_full_leibniz(const KronRankOneInstance<T>& inst) {
  CheckResult r;
  r.name = "full-leibniz";
  if (inst.dim() > kLeibnizSizeLimit) {
    throw resource_error("full-leibniz needs dim <= " +
                         std::to_string(kLeibnizSizeLimit) + ", got " +
                         std::to_string(inst.dim()));
  }
  r.count = factorial(static_cast<int>(inst.dim()));
  const T direct = leibniz_det(materialize(inst));
  const T closed = closed_form_value(inst).value;
  if (!detail::values_agree(direct, closed)) {
    r.pass = false;
    r.note = "Leibniz expansion disagrees with the closed form";
  }
  return r;
}

template <class T>
int run_expand_typed(const ExpandOpts& opt) {
  const Profile profile = parse_profile(opt.gen.profile);
  const auto inst =
      random_instance<T>(opt.gen.n, opt.gen.f, opt.gen.seed, profile);

  std::vector<std::string> names;
  {
    std::stringstream ss(opt.checks == "all"
                             ? "detb,cdiag,sumdiag,ypower,full-leibniz"
                             : opt.checks);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) names.push_back(item);
    }
  }
  if (names.empty()) throw validation_error("no checks selected");

  std::vector<CheckResult> results;
  for (const std::string& name : names) {
    if (name == "detb") {
      results.push_back(check_detb(inst));
    } else if (name == "cdiag") {
      results.push_back(check_cdiag(inst, opt.limit));
    } else if (name == "sumdiag") {
      results.push_back(check_sumdiag(inst, opt.limit));
    } else if (name == "ypower") {
      results.push_back(check_ypower(inst, opt.limit));
    } else if (name == "full-leibniz") {
      results.push_back(check_full_leibniz(inst));
    } else {
      throw validation_error("unknown check '" + name + "'");
    }
  }

  bool all_pass = true;
  for (const auto& r : results) all_pass = all_pass && r.pass;

  if (opt.as_json) {
    json out;
    out["N"] = opt.gen.n;
    out["F"] = opt.gen.f;
    out["seed"] = opt.gen.seed;
    out["profile"] = opt.gen.profile;
    out["mode"] = opt.mode;
    json checks = json::array();
    for (const auto& r : results) {
      json jc;
      jc["check"] = r.name;
      jc["pass"] = r.pass;
      jc["count"] = r.count;
      if (!r.note.empty()) jc["note"] = r.note;
      checks.push_back(std::move(jc));
    }
    out["checks"] = std::move(checks);
    out["pass"] = all_pass;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "expand N=" << opt.gen.n << " F=" << opt.gen.f
              << " seed=" << opt.gen.seed << " profile=" << opt.gen.profile
              << " mode=" << opt.mode << "\n";
    for (const auto& r : results) {
      std::cout << "check=" << r.name << " " << (r.pass ? "PASS" : "FAIL")
                << " count=" << r.count;
      if (!r.note.empty()) std::cout << "  (" << r.note << ")";
      std::cout << "\n";
    }
  }
  return all_pass ? 0 : 1;
}

int run_expand(const ExpandOpts& opt) {
  return dispatch_mode(parse_mode(opt.mode), [&](auto tag) {
    return run_expand_typed<decltype(tag)>(opt);
  });
}

// --------------------------------------------------------------- generate

struct GenerateOpts {
  GeneratorSpec gen;
  std::string mode = "float";
  std::string out_file;
};

template <class T>
int run_generate_typed(const GenerateOpts& opt) {
  const Profile profile = parse_profile(opt.gen.profile);
  const auto inst =
      random_instance<T>(opt.gen.n, opt.gen.f, opt.gen.seed, profile);
  const json j = instance_to_json(inst);
  if (opt.out_file.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(opt.out_file);
    if (!out) throw validation_error("cannot write '" + opt.out_file + "'");
    out << j.dump(2) << "\n";
  }
  return 0;
}

int run_generate(const GenerateOpts& opt) {
  return dispatch_mode(parse_mode(opt.mode), [&](auto tag) {
    return run_generate_typed<decltype(tag)>(opt);
  });
}

// ------------------------------------------------------------------ bench

struct BenchOpts {
  std::vector<int> sizes = {4, 8, 16, 32};
  int reps = 3;
  std::uint64_t seed = 12345;
  std::optional<std::size_t> cap;
  bool as_json = false;
};

int run_bench(const BenchOpts& opt) {
  const std::size_t cap = resolve_dense_cap(opt.cap);
  std::vector<std::pair<int, int>> sizes;
  sizes.reserve(opt.sizes.size());
  for (int s : opt.sizes) {
    if (s < 1) throw validation_error("sizes must be positive");
    sizes.emplace_back(s, s);
  }
  const auto rows = bench_grid(sizes, opt.reps, opt.seed, cap);
  if (opt.as_json) {
    json out = json::array();
    for (const auto& r : rows) {
      json jr;
      jr["N"] = r.n;
      jr["F"] = r.f;
      jr["NF"] = r.nf;
      jr["t_closed_ns"] = r.t_closed_ns;
      jr["t_dense_ns"] = r.t_dense_ns;
      jr["speedup"] = r.speedup;
      out.push_back(std::move(jr));
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << bench_csv_header() << "\n";
    for (const auto& r : rows) std::cout << bench_csv_row(r) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"determinants of sums of Kronecker rank-one products"};
  app.require_subcommand(1);

  ComputeOpts compute_opts;
  auto* compute = app.add_subcommand(
      "compute", "closed-form determinant of an instance file");
  compute->add_option("file", compute_opts.file, "instance JSON file")
      ->required();
  compute->add_option("--mode", compute_opts.mode, "float|exact");
  compute->add_flag("--json", compute_opts.as_json, "JSON output");

  VerifyOpts verify_opts;
  auto* verify = app.add_subcommand(
      "verify", "compare the closed form against the dense oracle");
  verify->add_option("file", verify_opts.file, "instance JSON file");
  verify->add_option("--n", verify_opts.gen.n, "generated instance N")
      ->check(CLI::PositiveNumber);
  verify->add_option("--f", verify_opts.gen.f, "generated instance F")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_opts.gen.seed, "first seed");
  verify->add_option("--profile", verify_opts.gen.profile,
                     "uniform|integer_small|ill_conditioned|singular_a|"
                     "singular_x|singular_y|identity");
  verify->add_option("--count", verify_opts.count, "number of seeds to sweep")
      ->check(CLI::PositiveNumber);
  verify->add_option("--mode", verify_opts.mode, "float|exact");
  verify->add_option("--cap", verify_opts.cap, "dense dimension cap");
  verify->add_flag("--corrupt", verify_opts.corrupt,
                   "debug: perturb one materialized entry (must fail)");
  verify->add_flag("--json", verify_opts.as_json, "JSON output");

  ExpandOpts expand_opts;
  auto* expand = app.add_subcommand(
      "expand", "run the permutation-expansion identity checks");
  expand->add_option("--n", expand_opts.gen.n, "instance N")
      ->check(CLI::PositiveNumber);
  expand->add_option("--f", expand_opts.gen.f, "instance F")
      ->check(CLI::PositiveNumber);
  expand->add_option("--seed", expand_opts.gen.seed, "generator seed");
  expand->add_option("--profile", expand_opts.gen.profile, "entry profile");
  expand->add_option("--checks", expand_opts.checks,
                     "all or a comma list of "
                     "detb,cdiag,sumdiag,ypower,full-leibniz");
  expand->add_option("--mode", expand_opts.mode, "float|exact (default exact)");
  expand->add_option("--limit", expand_opts.limit, "tuple enumeration limit");
  expand->add_flag("--json", expand_opts.as_json, "JSON output");

  GenerateOpts generate_opts;
  auto* generate = app.add_subcommand(
      "generate", "emit a seeded random instance as JSON");
  generate->add_option("--n", generate_opts.gen.n, "instance N")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--f", generate_opts.gen.f, "instance F")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--seed", generate_opts.gen.seed, "generator seed");
  generate->add_option("--profile", generate_opts.gen.profile, "entry profile");
  generate->add_option("--mode", generate_opts.mode,
                       "float|exact (exact writes p/q strings)");
  generate->add_option("-o,--out", generate_opts.out_file, "output file");

  BenchOpts bench_opts;
  auto* bench = app.add_subcommand(
      "bench", "time the closed form against the dense oracle");
  bench->add_option("--sizes", bench_opts.sizes, "grid of N=F sizes")
      ->delimiter(',');
  bench->add_option("--reps", bench_opts.reps, "repetitions per timing")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_opts.seed, "generator seed");
  bench->add_option("--cap", bench_opts.cap, "dense dimension cap");
  bench->add_flag("--json", bench_opts.as_json, "JSON output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compute) return run_compute(compute_opts);
    if (*verify) return run_verify(verify_opts);
    if (*expand) return run_expand(expand_opts);
    if (*generate) return run_generate(generate_opts);
    if (*bench) return run_bench(bench_opts);
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const resource_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 4;
  } catch (const verification_error& e) {
    std::cerr << "verification error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    // validation_error and friends
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::out_of_range& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
