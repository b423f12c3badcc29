#include "commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "tvs/error.hpp"
#include "tvs/extraction.hpp"
#include "tvs/gridset.hpp"
#include "tvs/io.hpp"
#include "tvs/lss.hpp"
#include "tvs/variety.hpp"

namespace tvs::cli {

namespace {

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
  for (const char* o : options)
    if (v == o) return true;
  return false;
}

Ambient2 ambient(const RunConfig& cfg) { return Ambient2{cfg.p, cfg.nG, cfg.nH}; }

std::string gen_kind(const RunConfig& cfg) { return cfg.kind.empty() ? "full" : cfg.kind; }
std::string bench_kind(const RunConfig& cfg) { return cfg.kind.empty() ? "enumerate" : cfg.kind; }

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty())
    out << text << '\n';
  else
    write_file(cfg.out, text + "\n");
}

std::string read_input(const RunConfig& cfg) {
  if (cfg.in.empty()) throw InvalidArgument("--in is required for " + cfg.command);
  try {
    return read_file(cfg.in);
  } catch (const InvalidArgument&) {
    throw;
  } catch (const Error& e) {
    throw InvalidArgument(e.what());
  }
}

TransverseSet as_transverse(const SetFile& f) {
  if (const auto* g = std::get_if<GridSet>(&f)) return to_transverse(*g);
  return std::get<TransverseSet>(f);
}

json witness_json(const SliceWitness& w) {
  return json{{"kind", w.kind == SliceWitness::Kind::Row ? "row" : "column"},
              {"index", w.index.code},
              {"reason", w.reason}};
}

std::string set_text(const TransverseSet& t, const std::string& format) {
  if (format == "grid") return to_json(to_gridset(t)).dump();
  return to_json(t).dump();
}

ExtractConfig extract_config(const RunConfig& cfg) {
  ExtractConfig e;
  e.eps = cfg.eps;
  e.seed = cfg.seed;
  e.mode = cfg.mode == "exhaustive" ? SearchMode::Exhaustive : SearchMode::Sampled;
  e.anchor_budget = cfg.budget;
  if (cfg.certify == "exhaustive")
    e.certify = CertifyMode::Exhaustive;
  else if (cfg.certify == "sampled")
    e.certify = CertifyMode::Sampled;
  return e;
}

int dominant_dim(const LinearSubspaceSystem& s) {
  std::map<int, std::uint64_t> freq;
  for (const auto& v : s.table()) ++freq[v.dim()];
  int best = 0;
  std::uint64_t best_count = 0;
  for (const auto& [d, c] : freq)
    if (c > best_count) {
      best = d;
      best_count = c;
    }
  return best;
}

struct BenchRow {
  std::string source;
  int p = 0, nG = 0, nH = 0;
  std::uint64_t seed = 0;
  int r_gen = -1;
  double density = 0;
  double log_inv_density = 0;
  int codim_U = 0, codim_V = 0, r_star = 0, codimension = 0;
  bool certified = false;
  std::string certify_mode;
  std::string error;
  double seconds = 0;
};

BenchRow bench_one(const TransverseSet& t, const ExtractConfig& ecfg, std::string source, std::uint64_t seed,
                   int r_gen) {
  BenchRow row;
  row.source = std::move(source);
  row.p = t.ambient().p;
  row.nG = t.ambient().nG;
  row.nH = t.ambient().nH;
  row.seed = seed;
  row.r_gen = r_gen;
  row.density = t.density();
  row.log_inv_density = std::log(1.0 / row.density) / std::log(static_cast<double>(row.p));
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ExtractionReport rep = extract_variety(t, ecfg);
    row.codim_U = rep.variety.U().codim();
    row.codim_V = rep.variety.V().codim();
    row.r_star = rep.variety.r();
    row.codimension = rep.variety.codimension();
    row.certified = rep.certificate.pass;
    row.certify_mode = rep.certificate.mode;
  } catch (const CertificationFailed& e) {
    row.error = std::string("certification failed: ") + e.what();
  } catch (const BudgetExceeded& e) {
    row.error = std::string("budget exhausted: ") + e.what();
  } catch (const CapExceeded& e) {
    row.error = std::string("cap exceeded: ") + e.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

json row_json(const BenchRow& r) {
  const double L = r.log_inv_density;
  json j{{"source", r.source},
         {"p", r.p},
         {"nG", r.nG},
         {"nH", r.nH},
         {"seed", r.seed},
         {"r_gen", r.r_gen},
         {"density", r.density},
         {"log_inv_density", L},
         {"log_cubed", L * L * L},
         {"log_squared", L * L},
         {"codim_U", r.codim_U},
         {"codim_V", r.codim_V},
         {"r_star", r.r_star},
         {"codimension", r.codimension},
         {"certified", r.certified},
         {"certify_mode", r.certify_mode},
         {"seconds", r.seconds}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

std::string csv_field(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q.push_back('"');
      q.push_back(c);
    }
    return q + "\"";
  }
  return v.dump();
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (!one_of(cfg.command, {"gen", "check", "extract", "oracle", "bench"}))
    throw InvalidArgument("unknown command '" + cfg.command + "'");
  if (!is_prime(cfg.p) || cfg.p > kMaxPrime)
    throw InvalidArgument("--p must be a prime no larger than " + std::to_string(kMaxPrime));
  if (cfg.nG < 0 || cfg.nH < 0 || cfg.nG > 24 || cfg.nH > 24)
    throw InvalidArgument("--nG and --nH must lie in [0, 24]");
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw InvalidArgument("--eps must lie in (0, 1)");
  if (!one_of(cfg.mode, {"sampled", "exhaustive"})) throw InvalidArgument("--mode must be sampled or exhaustive");
  if (!one_of(cfg.certify, {"auto", "exhaustive", "sampled"}))
    throw InvalidArgument("--certify must be auto, exhaustive or sampled");
  if (cfg.budget == 0) throw InvalidArgument("--budget must be positive");
  if (cfg.r < 0) throw InvalidArgument("--r must be non-negative");
  if (cfg.components < 0) throw InvalidArgument("--components must be non-negative");
  if (cfg.count <= 0) throw InvalidArgument("--count must be positive");
  if (cfg.command == "gen") {
    if (!one_of(gen_kind(cfg), {"full", "bilinear", "lss", "enumerate"}))
      throw InvalidArgument("gen --kind must be full, bilinear, lss or enumerate");
    if (!one_of(cfg.format, {"json", "grid"})) throw InvalidArgument("gen --format must be json or grid");
    if (gen_kind(cfg) == "enumerate" && cfg.out.empty())
      throw InvalidArgument("gen --kind enumerate needs --out <directory>");
  }
  if (cfg.command == "bench") {
    if (!one_of(bench_kind(cfg), {"enumerate", "bilinear", "lss"}))
      throw InvalidArgument("bench --kind must be enumerate, bilinear or lss");
    if (!one_of(cfg.format, {"json", "csv"})) throw InvalidArgument("bench --format must be json or csv");
  }
}

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  const Ambient2 amb = ambient(cfg);
  const std::string kind = gen_kind(cfg);
  if (kind == "enumerate") {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out);
    std::uint64_t n = 0;
    enumerate_transverse_small(amb, [&](const TransverseSet& t) {
      char name[32];
      std::snprintf(name, sizeof name, "set_%05llu.json", static_cast<unsigned long long>(n++));
      write_file((fs::path(cfg.out) / name).string(), set_text(t, cfg.format) + "\n");
      return true;
    });
    out << json{{"kind", kind}, {"p", amb.p}, {"nG", amb.nG}, {"nH", amb.nH}, {"count", n}, {"dir", cfg.out}}.dump()
        << '\n';
    return kOk;
  }
  TransverseSet t;
  if (kind == "full") {
    t = TransverseSet::full(amb);
  } else if (kind == "bilinear") {
    t = gen_from_bilinear(BilinearMapSpec{amb, cfg.r, cfg.dimU, cfg.dimV}, cfg.seed).set;
  } else {
    t = from_lss(random_lss(amb.G(), amb.H(), cfg.components, cfg.seed));
  }
  emit(cfg, out, set_text(t, cfg.format));
  return kOk;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const std::string text = read_input(cfg);
  json rep{{"input_sha256", sha256_hex(text)}};
  std::optional<TransverseSet> parsed;
  try {
    parsed = as_transverse(parse_set(text));
  } catch (const NotTransverse& e) {
    rep["transverse"] = false;
    rep["error"] = e.what();
    rep["witness"] = witness_json(e.witness());
    emit(cfg, out, rep.dump(2));
    return kInvalidInput;
  }
  const TransverseSet& t = *parsed;
  const Ambient2& a = t.ambient();
  rep["p"] = a.p;
  rep["nG"] = a.nG;
  rep["nH"] = a.nH;
  rep["cells"] = t.count();
  rep["density"] = t.density();
  rep["transverse"] = true;

  const LinearSubspaceSystem sys = from_transverse(t);
  const LssValidation v = validate(sys);
  json lss{{"valid", v.ok}};
  if (!v.ok) lss["violation"] = {{"reason", v.reason}, {"x1", v.x1.code}, {"x2", v.x2.code}};
  lss["scaling"] = check_scaling(sys);
  lss["zero_sum_r2"] = check_zero_sum(sys, 2);
  if (a.G().size() <= 256) lss["zero_sum_r3"] = check_zero_sum(sys, 3);
  rep["lss"] = std::move(lss);
  rep["profile"] = to_json(quasirandomness_profile(sys, dominant_dim(sys)));

  if (a.cells(~std::uint64_t{0}) <= kDefaultGridCap) {
    const GridSet g = to_gridset(t);
    const bool h = dhor(g) == g;
    const bool w = dver(g) == g;
    rep["delta_invariance"] = {{"dhor", h}, {"dver", w}};
  } else {
    rep["delta_invariance"] = nullptr;
  }
  emit(cfg, out, rep.dump(2));
  return kOk;
}

int cmd_extract(const RunConfig& cfg, std::ostream& out) {
  const std::string text = read_input(cfg);
  const TransverseSet t = as_transverse(parse_set(text));
  const ExtractionReport rep = extract_variety(t, extract_config(cfg));
  emit(cfg, out, to_json(rep, sha256_hex(text)).dump(2));
  return kOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const std::string text = read_input(cfg);
  const TransverseSet t = as_transverse(parse_set(text));
  const ExactVarietyResult res = is_exact_variety(t);
  json forms = json::array();
  for (const auto& b : res.witness) {
    json rows = json::array();
    for (int i = 0; i < b.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < b.cols(); ++j) row.push_back(b(i, j));
      rows.push_back(std::move(row));
    }
    forms.push_back(std::move(rows));
  }
  const json rep{{"input_sha256", sha256_hex(text)},
                 {"exact", res.exact},
                 {"r", res.exact ? static_cast<int>(res.witness.size()) : -1},
                 {"minimal", res.minimal},
                 {"annihilator_dim", res.annihilator_dim},
                 {"witness", std::move(forms)}};
  emit(cfg, out, rep.dump(2));
  return kOk;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  const Ambient2 amb = ambient(cfg);
  const ExtractConfig ecfg = extract_config(cfg);
  const std::string kind = bench_kind(cfg);
  std::vector<BenchRow> rows;
  if (kind == "enumerate") {
    std::uint64_t n = 0;
    enumerate_transverse_small(amb, [&](const TransverseSet& t) {
      rows.push_back(bench_one(t, ecfg, "enumerate", n++, -1));
      return true;
    });
  } else if (kind == "bilinear") {
    for (int r = 1; r <= std::max(cfg.r, 1); ++r)
      for (int i = 0; i < cfg.count; ++i) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        const auto gen = gen_from_bilinear(BilinearMapSpec{amb, r, cfg.dimU, cfg.dimV}, seed);
        rows.push_back(bench_one(gen.set, ecfg, "bilinear", seed, r));
      }
  } else {
    for (int i = 0; i < cfg.count; ++i) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
      const TransverseSet t = from_lss(random_lss(amb.G(), amb.H(), cfg.components, seed));
      rows.push_back(bench_one(t, ecfg, "lss", seed, -1));
    }
  }

  std::uint64_t certified = 0;
  for (const auto& r : rows) certified += r.certified ? 1 : 0;
  const double fraction = rows.empty() ? 1.0 : static_cast<double>(certified) / static_cast<double>(rows.size());

  std::ostringstream os;
  if (cfg.format == "csv") {
    bool header = true;
    for (const auto& r : rows) {
      json j = row_json(r);
      if (!j.contains("error")) j["error"] = "";
      if (header) {
        bool first = true;
        for (const auto& [k, v] : j.items()) {
          os << (first ? "" : ",") << k;
          first = false;
        }
        os << '\n';
        header = false;
      }
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        os << (first ? "" : ",") << csv_field(v);
        first = false;
      }
      os << '\n';
    }
    std::string text = os.str();
    if (!text.empty()) text.pop_back();
    emit(cfg, out, text);
  } else {
    json table = json::array();
    for (const auto& r : rows) table.push_back(row_json(r));
    const json rep{{"kind", kind},
                   {"p", amb.p},
                   {"nG", amb.nG},
                   {"nH", amb.nH},
                   {"eps", cfg.eps},
                   {"seed", cfg.seed},
                   {"summary", {{"runs", rows.size()}, {"certified", certified}, {"certified_fraction", fraction}}},
                   {"rows", std::move(table)}};
    emit(cfg, out, rep.dump(2));
  }
  return certified == rows.size() ? kOk : kCertificationFailed;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    if (cfg.command == "gen") return cmd_gen(cfg, out);
    if (cfg.command == "check") return cmd_check(cfg, out);
    if (cfg.command == "extract") return cmd_extract(cfg, out);
    if (cfg.command == "oracle") return cmd_oracle(cfg, out);
    return cmd_bench(cfg, out);
  } catch (const CertificationFailed& e) {
    err << "certification failed: " << e.what() << '\n';
    return kCertificationFailed;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << '\n';
    if (!e.diagnostics().empty()) err << e.diagnostics() << '\n';
    return kBudgetExhausted;
  } catch (const CapExceeded& e) {
    err << "budget exhausted: " << e.what() << '\n';
    return kBudgetExhausted;
  } catch (const ParseError& e) {
    err << "parse error at byte " << e.offset() << ": " << e.what() << '\n';
    return kInvalidInput;
  } catch (const NotTransverse& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DimensionMismatch& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Transverse sets and bilinear varieties over prime fields"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.add_option("--p", cfg.p, "Field characteristic (prime)");
  app.add_option("--nG", cfg.nG, "Dimension of G");
  app.add_option("--nH", cfg.nH, "Dimension of H");
  app.add_option("--eps", cfg.eps, "Regularity target");
  app.add_option("--seed", cfg.seed, "Root seed for every random stream");
  app.add_option("--mode", cfg.mode, "Regularization search: sampled | exhaustive");
  app.add_option("--certify", cfg.certify, "Containment check: auto | exhaustive | sampled");
  app.add_option("--budget", cfg.budget, "Anchor scan budget");
  app.add_option("--in", cfg.in, "Input set file");
  app.add_option("--out", cfg.out, "Output file (directory for gen --kind enumerate)");
  app.add_option("--format", cfg.format, "gen: json | grid; bench: json | csv");
  app.add_option("--kind", cfg.kind, "gen: full | bilinear | lss | enumerate; bench: enumerate | bilinear | lss");
  app.add_option("--r", cfg.r, "Number of forms (gen) or largest number of forms (bench)");
  app.add_option("--dimU", cfg.dimU, "Dimension of U for bilinear generation (-1 for G)");
  app.add_option("--dimV", cfg.dimV, "Dimension of V for bilinear generation (-1 for H)");
  app.add_option("--components", cfg.components, "Summands for LSS generation");
  app.add_option("--count", cfg.count, "Seeds per parameter point in bench");
  app.add_subcommand("gen", "Write a transverse set (or all of them) to disk");
  app.add_subcommand("check", "Transversality, LSS validity, profile and invariance checks");
  app.add_subcommand("extract", "Extract and certify a bilinear variety inside a transverse set");
  app.add_subcommand("oracle", "Decide whether a tiny set is exactly a bilinear variety");
  app.add_subcommand("bench", "Sweep extraction over generated or enumerated sets");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInvalidInput;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return run(cfg, out, err);
}

}  // namespace tvs::cli
