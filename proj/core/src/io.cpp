#include "tvs/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <sstream>

namespace tvs {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field \"") + key + "\": " + e.what());
  }
}

Ambient2 ambient_from(const json& j) {
  Ambient2 a{field<int>(j, "p"), field<int>(j, "nG"), field<int>(j, "nH")};
  if (!is_prime(a.p) || a.nG < 0 || a.nH < 0) throw ParseError("invalid p, nG or nH");
  return a;
}

std::vector<std::uint64_t> codes(std::span<const Vec> basis) {
  std::vector<std::uint64_t> out;
  for (Vec v : basis) out.push_back(v.code);
  return out;
}

Subspace span_codes(const FieldSpec& f, const std::vector<std::uint64_t>& cs) {
  std::vector<Vec> vs;
  for (auto c : cs) {
    if (c >= f.size()) throw ParseError("vector code " + std::to_string(c) + " outside the ambient space");
    vs.push_back(Vec{c});
  }
  return Subspace::span(f, vs);
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string to_hex(const GridSet& g) {
  const std::uint64_t bytes = (g.size() + 7) / 8;
  std::string out;
  out.reserve(bytes * 2);
  const auto words = g.words();
  for (std::uint64_t k = 0; k < bytes; ++k) {
    const unsigned b = static_cast<unsigned>((words[k / 8] >> (8 * (k % 8))) & 0xffU);
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0xfU]);
  }
  return out;
}

GridSet gridset_from_hex(const Ambient2& ambient, std::string_view hex) {
  GridSet g(ambient);
  const std::uint64_t bytes = (g.size() + 7) / 8;
  if (hex.size() != bytes * 2)
    throw ParseError("cell string has " + std::to_string(hex.size()) + " hex digits, expected " +
                     std::to_string(bytes * 2));
  auto words = g.words();
  for (std::uint64_t k = 0; k < bytes; ++k) {
    const int hi = nibble(hex[2 * k]);
    const int lo = nibble(hex[2 * k + 1]);
    if (hi < 0 || lo < 0) throw ParseError("invalid hex digit", 2 * k);
    const std::uint64_t b = static_cast<std::uint64_t>(hi * 16 + lo);
    words[k / 8] |= b << (8 * (k % 8));
  }
  if (const auto tail = g.size() % 64; tail != 0 && (words.back() >> tail) != 0)
    throw ParseError("bits set past the last cell");
  return g;
}

json to_json(const Subspace& s) {
  return json{{"p", s.field().p()}, {"n", s.field().n()}, {"basis", codes(s.basis())}};
}

Subspace subspace_from_json(const json& j) {
  const FieldSpec f(field<int>(j, "p"), field<int>(j, "n"));
  return span_codes(f, field<std::vector<std::uint64_t>>(j, "basis"));
}

json to_json(const GridSet& g) {
  const auto& a = g.ambient();
  return json{{"p", a.p}, {"nG", a.nG}, {"nH", a.nH}, {"cells", to_hex(g)}};
}

GridSet gridset_from_json(const json& j) {
  return gridset_from_hex(ambient_from(j), field<std::string>(j, "cells"));
}

json to_json(const TransverseSet& t) {
  const auto& a = t.ambient();
  json cols = json::array();
  for (const auto& c : t.columns()) cols.push_back(codes(c.basis()));
  return json{{"p", a.p}, {"nG", a.nG}, {"nH", a.nH}, {"columns", std::move(cols)}};
}

TransverseSet transverse_from_json(const json& j) {
  const Ambient2 a = ambient_from(j);
  const FieldSpec H = a.H();
  const auto raw = field<std::vector<std::vector<std::uint64_t>>>(j, "columns");
  std::vector<Subspace> cols;
  for (const auto& c : raw) cols.push_back(span_codes(H, c));
  if (cols.size() != a.G().size()) throw ParseError("expected one column per element of G");
  return TransverseSet::from_columns(a, std::move(cols));
}

json to_json(const LinearSubspaceSystem& s) {
  json table = json::array();
  for (const auto& v : s.table()) table.push_back(codes(v.basis()));
  return json{{"p", s.U().field().p()},
              {"nG", s.U().field().n()},
              {"nH", s.V().field().n()},
              {"U_basis", codes(s.U().basis())},
              {"V_basis", codes(s.V().basis())},
              {"table", std::move(table)}};
}

LinearSubspaceSystem lss_from_json(const json& j) {
  const Ambient2 a = ambient_from(j);
  const Subspace U = j.contains("U_basis") ? span_codes(a.G(), field<std::vector<std::uint64_t>>(j, "U_basis"))
                                           : Subspace::full(a.G());
  const Subspace V = span_codes(a.H(), field<std::vector<std::uint64_t>>(j, "V_basis"));
  const FieldSpec values(a.p, V.dim());
  std::vector<Subspace> table;
  for (const auto& entry : field<std::vector<std::vector<std::uint64_t>>>(j, "table"))
    table.push_back(span_codes(values, entry));
  try {
    return LinearSubspaceSystem(U, V, std::move(table));
  } catch (const DimensionMismatch& e) {
    throw ParseError(e.what());
  }
}

json to_json(const BilinearVariety& w) {
  json forms = json::array();
  for (const auto& b : w.forms()) forms.push_back(matrix_rows(b));
  const auto a = w.ambient();
  return json{{"p", a.p},
              {"nG", a.nG},
              {"nH", a.nH},
              {"U_basis", codes(w.U().basis())},
              {"V_basis", codes(w.V().basis())},
              {"forms", std::move(forms)}};
}

BilinearVariety variety_from_json(const json& j) {
  const Ambient2 a = ambient_from(j);
  const Subspace U = span_codes(a.G(), field<std::vector<std::uint64_t>>(j, "U_basis"));
  const Subspace V = span_codes(a.H(), field<std::vector<std::uint64_t>>(j, "V_basis"));
  std::vector<Matrix> forms;
  for (const auto& rows : field<std::vector<std::vector<std::vector<int>>>>(j, "forms")) {
    if (static_cast<int>(rows.size()) != a.nG) throw ParseError("form must have nG rows");
    Matrix b(a.p, a.nG, a.nH);
    for (int i = 0; i < a.nG; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != a.nH) throw ParseError("form must have nH columns");
      for (int k = 0; k < a.nH; ++k) b.set(i, k, rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
    }
    forms.push_back(std::move(b));
  }
  return BilinearVariety(U, V, std::move(forms));
}

json to_json(const QuasirandomnessProfile& q) {
  return json{{"d", q.d},
              {"eps1", q.eps1},
              {"eps2", q.eps2},
              {"bad_points", q.bad_points},
              {"points", q.points},
              {"bad_pairs", q.bad_pairs},
              {"pairs", q.pairs}};
}

json to_json(const ContainmentCertificate& c) {
  json j{{"pass", c.pass}, {"mode", c.mode}, {"checked", c.checked}};
  if (c.violation) j["violation"] = {c.violation->first.code, c.violation->second.code};
  return j;
}

json to_json(const ExtractionReport& r, const std::string& input_digest) {
  const auto& reg = r.regularity;
  json attempts = json::array();
  for (const auto& a : r.attempts) attempts.push_back({{"d", a.d}, {"outcome", a.outcome}});
  json regj{{"U", to_json(reg.U)},
            {"V", to_json(reg.V)},
            {"d", reg.d},
            {"d0", reg.d0},
            {"d0_formula", reg.d0_formula},
            {"y0", reg.y0.code},
            {"x0", reg.x0.code},
            {"iterations", reg.iterations},
            {"exceptions_i", reg.certified.exceptions_i},
            {"points", reg.certified.points},
            {"exceptions_ii", reg.certified.exceptions_ii},
            {"pairs", reg.certified.pairs},
            {"trace", reg.trace}};
  json structj = nullptr;
  if (r.structure) {
    const auto& st = *r.structure;
    structj = {{"d", st.d},
               {"profile", to_json(st.profile)},
               {"good_count", st.good_count},
               {"good_fraction", st.good_fraction},
               {"quad_pairs", st.quad_pairs},
               {"quad_skipped", st.quad_skipped},
               {"voted_points", st.voted_points}};
    if (st.anchor)
      structj["anchor"] = {{"a", st.anchor->a.code},
                           {"score", st.anchor->score},
                           {"good_triples", st.anchor->good_triples},
                           {"triples", st.anchor->triples},
                           {"pairs", st.anchor->pairs},
                           {"scanned", st.anchor->scanned}};
    if (st.extension)
      structj["extension"] = {{"measured_eps", st.extension->measured_eps},
                              {"agreement", st.extension->agreement},
                              {"agreement_fraction", st.extension->agreement_fraction},
                              {"consensus_fit", st.extension->consensus_fit}};
  }
  const double L = r.log_inv_density;
  json timing = json::object();
  for (const auto& [k, v] : r.timing) timing[k] = v;
  return json{{"input_sha256", input_digest},
              {"density", r.density},
              {"eps", reg.eps_target},
              {"regularity", std::move(regj)},
              {"structure", std::move(structj)},
              {"attempts", std::move(attempts)},
              {"variety", to_json(r.variety)},
              {"codim_U", r.variety.U().codim()},
              {"codim_V", r.variety.V().codim()},
              {"r", r.variety.r()},
              {"codimension", r.variety.codimension()},
              {"bound_shapes", {{"log_cubed", L * L * L}, {"log_squared", L * L}, {"log", L}}},
              {"argument_checked", r.argument_checked},
              {"restricted_to_good", r.restricted_to_good},
              {"certificate", to_json(r.certificate)},
              {"timing", std::move(timing)}};
}

SetFile parse_set(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!j.is_object()) throw ParseError("top-level value must be an object");
  if (j.contains("cells")) return gridset_from_json(j);
  if (j.contains("columns")) return transverse_from_json(j);
  throw ParseError("expected a \"cells\" or \"columns\" field");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed for " + path);
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 failed");
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kHexDigits[md[i] >> 4]);
    out.push_back(kHexDigits[md[i] & 0xfU]);
  }
  return out;
}

}  // namespace tvs
