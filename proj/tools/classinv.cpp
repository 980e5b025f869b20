// Command line front end: stword, find, classpoly, verify.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "classinv/cmfield.hpp"

using namespace classinv;
using nlohmann::json;

namespace {

struct Common {
  bool json_out = false;
};

struct JobSpec {
  i64 D = 0;
  std::string family = "g72";
  i64 level_N = 0;
  int degree = 0;  // 0: smallest degree with invariants
  int max_degree = 4;
  int digits = 0;  // 0: default
  std::uint64_t seed = 1;
  std::optional<i64> B, C;

  std::string family_name() const { return level_N ? "nu" + std::to_string(level_N) : family; }
};

/// Runs `f`, prefixing any library error with the stage it came from.
template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), name + ": " + e.what());
  }
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::BadInput: return 2;
    case ErrorKind::Verification: return 3;
    case ErrorKind::Precision:
    case ErrorKind::Recognition: return 4;
  }
  return 1;
}

void add_job_options(CLI::App* sub, JobSpec& job) {
  sub->add_option("--disc,-D", job.D, "discriminant D < -4, D = 0,1 mod 4")->required()->allow_extra_args(false);
  sub->add_option("--family", job.family, "function family: g72 or nuN with N an odd prime");
  sub->add_option("--level-N", job.level_N, "shorthand for --family nuN");
  sub->add_option("--degree", job.degree, "degree of the invariants (default: smallest with invariants)");
  sub->add_option("--max-degree", job.max_degree, "search bound for the smallest degree");
  sub->add_option("--seed", job.seed, "seed for the Hilbert 90 splitting");
  sub->add_option("--B", job.B, "theta is a root of x^2 + Bx + C");
  sub->add_option("--C", job.C, "theta is a root of x^2 + Bx + C");
}

struct Pipeline {
  std::shared_ptr<FunctionBasis> fb;
  OrderContext ctx;
  ReciprocityGroup G;
};

Pipeline setup(const JobSpec& job) {
  Pipeline p;
  p.fb = stage("basis", [&] { return FunctionBasis::by_name(job.family_name()); });
  p.ctx = stage("order", [&] { return OrderContext::make(job.D, p.fb->level(), job.B, job.C); });
  p.G = stage("group", [&] { return build_group(p.ctx); });
  return p;
}

DescentResult descend(const Pipeline& p, const JobSpec& job) {
  const int n = job.degree ? job.degree : stage("invariants", [&] { return min_degree(p.G, *p.fb, job.max_degree); });
  auto r = stage("descent", [&] { return class_invariant_basis(p.G, p.fb, n, job.seed); });
  if (r.vectors.empty()) fail(ErrorKind::Verification, "descent: no class invariants of degree " + std::to_string(n));
  return r;
}

std::string read_text(const std::string& arg) {
  std::ifstream in(arg);
  if (!in) return arg;
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

int run_stword(const Common& c, i64 M, const std::string& matrix, bool verify) {
  std::vector<i64> e;
  std::stringstream ss(matrix);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      e.push_back(std::stoll(tok));
    } catch (const std::exception&) {
      fail(ErrorKind::BadInput, "stword: --matrix expects a,b,c,d");
    }
  }
  if (e.size() != 4) fail(ErrorKind::BadInput, "stword: --matrix expects a,b,c,d");
  const ResidueMatrix m(e[0], e[1], e[2], e[3], M);
  const STWord w = stage("stword", [&] { return decompose_st(m); });
  const ResidueMatrix back = eval_word(w, M);
  if (!(back == m)) fail(ErrorKind::Verification, "stword: word does not evaluate to the input");
  if (c.json_out) {
    json j{{"modulus", M}, {"matrix", m.to_string()}, {"word", w.to_string()}, {"length", w.letters().size()}};
    if (verify) j["verified"] = back.to_string();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << w.to_string() << "\n";
    if (verify) std::cout << back.to_string() << "\n";
  }
  return 0;
}

int run_find(const Common& c, const JobSpec& job) {
  const Pipeline p = setup(job);
  const DescentResult r = descend(p, job);
  const auto invs = r.invariants();
  for (const auto& w : invs)
    if (!verify_class_invariant(w, *p.fb, p.G)) fail(ErrorKind::Verification, "find: descended invariant failed verification");
  if (c.json_out) {
    json j{{"discriminant", job.D},
           {"B", p.ctx.B},
           {"C", p.ctx.C},
           {"family", p.fb->name()},
           {"level", p.fb->level()},
           {"group_order", p.G.elements.size()},
           {"h_order", p.G.H.size()},
           {"det_image_size", r.det_image.size()},
           {"fixed_field_degree", r.fixed_field_degree},
           {"degree", r.degree},
           {"h_invariant_dim", r.V.dim()},
           {"seed", r.split.seed},
           {"splitting_attempts", r.split.attempts},
           {"verified", true}};
    json arr = json::array();
    for (const auto& w : invs) arr.push_back(w.to_json());
    j["invariants"] = arr;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "D = " << job.D << ", family " << p.fb->name() << ", level " << p.fb->level() << "\n";
    std::cout << "|G| = " << p.G.elements.size() << ", |H| = " << p.G.H.size() << "\n";
    std::cout << "degree " << r.degree << ": H-invariants of dimension " << r.V.dim() << ", " << invs.size()
              << " rational class invariants\n";
    for (std::size_t i = 0; i < invs.size(); ++i) std::cout << "[" << i + 1 << "] " << invs[i].to_string() << "\n";
  }
  return 0;
}

int run_classpoly(const Common& c, JobSpec job, const std::string& invariant, const std::string& out) {
  const bool as_json = c.json_out || out == "json";
  if (out != "text" && out != "json") fail(ErrorKind::BadInput, "classpoly: --out must be text or json");
  ClassPolynomial poly;
  std::string source;
  if (invariant == "j") {
    const auto ctx = stage("order", [&] { return OrderContext::make(job.D, 2, job.B, job.C); });
    const int digits = job.digits ? job.digits : default_digits(job.D);
    poly = stage("classpoly", [&] { return hilbert_class_polynomial(ctx, digits); });
    source = "j";
  } else {
    const Pipeline p = setup(job);
    InvariantPolynomial w;
    const bool is_index = !invariant.empty() && std::all_of(invariant.begin(), invariant.end(), ::isdigit);
    if (is_index) {
      const auto invs = descend(p, job).invariants();
      const auto k = std::stoul(invariant);
      if (k < 1 || k > invs.size()) fail(ErrorKind::BadInput, "classpoly: invariant index out of range 1.." + std::to_string(invs.size()));
      w = invs[k - 1];
    } else {
      w = stage("parse", [&] { return InvariantPolynomial::parse(*p.fb, read_text(invariant)); });
    }
    if (!stage("verify", [&] { return verify_class_invariant(w, *p.fb, p.G); }))
      fail(ErrorKind::Verification, "verify: not a class invariant for this discriminant");
    const int digits = job.digits ? job.digits : default_digits(job.D);
    poly = stage("classpoly", [&] { return class_polynomial(w, *p.fb, p.ctx, digits); });
    source = w.to_string();
  }
  if (as_json) {
    json j = poly.to_json();
    j["invariant"] = source;
    j["seed"] = job.seed;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << poly.to_string() << "\n";
  }
  return 0;
}

int run_verify(const Common& c, const JobSpec& job, const std::string& invariant, bool generators_only) {
  const Pipeline p = setup(job);
  const auto w = stage("parse", [&] { return InvariantPolynomial::parse(*p.fb, read_text(invariant)); });
  const bool ok = stage("verify", [&] { return verify_class_invariant(w, *p.fb, p.G, generators_only); });
  if (c.json_out)
    std::cout << json{{"discriminant", job.D}, {"family", p.fb->name()}, {"invariant", w.to_string()}, {"class_invariant", ok}}.dump(2) << "\n";
  else
    std::cout << (ok ? "class invariant" : "not a class invariant") << "\n";
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class invariants from Shimura reciprocity"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--json", common.json_out, "JSON output");

  i64 modulus = 0;
  std::string matrix;
  bool verify_word = false;
  auto* st = app.add_subcommand("stword", "write a det-1 matrix mod M as a word in S and T");
  st->add_option("--modulus,-M", modulus, "modulus")->required();
  st->add_option("--matrix", matrix, "entries a,b,c,d")->required();
  st->add_flag("--verify", verify_word, "multiply the word back out");
  st->add_flag("--json", common.json_out, "JSON output");

  JobSpec find_job;
  auto* find = app.add_subcommand("find", "rational class invariants of the smallest degree");
  add_job_options(find, find_job);
  find->add_flag("--json", common.json_out, "JSON output");

  JobSpec cp_job;
  std::string cp_inv = "1", cp_out = "text";
  auto* cp = app.add_subcommand("classpoly", "class polynomial of an invariant");
  add_job_options(cp, cp_job);
  cp->add_option("--invariant", cp_inv, "1-based index into the descended basis, a polynomial, a file holding one, or j");
  cp->add_option("--digits", cp_job.digits, "working precision in decimal digits (default from CLASSINV_DIGITS or the discriminant)");
  cp->add_option("--out", cp_out, "text or json");
  cp->add_flag("--json", common.json_out, "JSON output");

  JobSpec v_job;
  std::string v_inv;
  bool v_gens = false;
  auto* ver = app.add_subcommand("verify", "check that a polynomial is a class invariant");
  add_job_options(ver, v_job);
  ver->add_option("--invariant", v_inv, "a polynomial or a file holding one")->required();
  ver->add_flag("--generators-only", v_gens, "check the generators of the group only");
  ver->add_flag("--json", common.json_out, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*st) return run_stword(common, modulus, matrix, verify_word);
    if (*find) return run_find(common, find_job);
    if (*cp) return run_classpoly(common, cp_job, cp_inv, cp_out);
    if (*ver) return run_verify(common, v_job, v_inv, v_gens);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
