#include "fockdens/scene.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fockdens/errors.hpp"

namespace fockdens {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(path.empty() ? k : path + "." + k, "unknown field");
}

double to_real(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

cplx to_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [re, im]");
  return {to_real(j[0], path + "[0]"), to_real(j[1], path + "[1]")};
}

MPoly parse_terms(const json& j, const std::string& path, int n) {
  if (!j.is_array()) fail(path, "expected a list of [[exponents], re, im] terms");
  MPoly p(n);
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string tp = path + "[" + std::to_string(t) + "]";
    const auto& term = j[t];
    if (!term.is_array() || term.size() != 3 || !term[0].is_array())
      fail(tp, "expected [[exponents], re, im]");
    if (static_cast<int>(term[0].size()) != n)
      fail(tp, "multi-index length " + std::to_string(term[0].size()) + " does not match dimension " +
                   std::to_string(n));
    MultiIndex a;
    for (const auto& e : term[0]) {
      if (!e.is_number_integer() || e.get<int>() < 0) fail(tp, "exponents must be non-negative integers");
      a.push_back(e.get<int>());
    }
    p.add_term(a, cplx(to_real(term[1], tp + "[1]"), to_real(term[2], tp + "[2]")));
  }
  return p;
}

json terms_to_json(const MPoly& p) {
  json out = json::array();
  for (const auto& [a, c] : p.terms()) out.push_back({a, c.real(), c.imag()});
  return out;
}

json complex_to_json(cplx c) { return {c.real(), c.imag()}; }

Sequence1D parse_sequence(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of [re, im] points");
  std::vector<cplx> pts;
  for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(to_complex(j[i], path + "[" + std::to_string(i) + "]"));
  try {
    return Sequence1D(std::move(pts), path);
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

json sequence_to_json(const Sequence1D& s) {
  json out = json::array();
  for (const auto& p : s.points) out.push_back(complex_to_json(p));
  return out;
}

Weight parse_weight(const json& j, int n) {
  check_keys(j, "weight", {"kind", "Q", "h"});
  const std::string kind = j.value("kind", "euclidean");
  if (kind == "euclidean") {
    if (j.contains("Q") || j.contains("h")) fail("weight", "euclidean weight takes no Q or h");
    return Weight::euclidean(n);
  }
  if (kind != "quadratic") fail("weight.kind", "expected \"euclidean\" or \"quadratic\"");
  if (!j.contains("Q")) fail("weight.Q", "missing");
  const auto& q = j["Q"];
  if (!q.is_array() || static_cast<int>(q.size()) != n) fail("weight.Q", "expected " + std::to_string(n) + " rows");
  cmat m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!q[r].is_array() || static_cast<int>(q[r].size()) != n)
      fail("weight.Q", "row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c)
      m(r, c) = to_complex(q[r][c], "weight.Q[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) fail("weight.Q", "not Hermitian");
  const MPoly h = j.contains("h") ? parse_terms(j["h"], "weight.h", n) : MPoly(n);
  return Weight::quadratic(HForm(m), h);
}

}  // namespace

Scene parse_scene_json(const json& j) {
  check_keys(j, "", {"dimension", "weight", "hypersurface", "sequences", "product_sequence", "defaults"});
  Scene s;
  if (!j.contains("dimension") || !j["dimension"].is_number_integer() || j["dimension"].get<int>() < 1)
    fail("dimension", "expected a positive integer");
  s.dimension = j["dimension"].get<int>();
  const int n = s.dimension;

  s.weight = j.contains("weight") ? parse_weight(j["weight"], n) : Weight::euclidean(n);

  if (j.contains("hypersurface")) {
    const auto& hj = j["hypersurface"];
    check_keys(hj, "hypersurface", {"terms", "factors", "gradient_floor"});
    const double floor = hj.contains("gradient_floor")
                             ? to_real(hj["gradient_floor"], "hypersurface.gradient_floor")
                             : 1e-8;
    if (hj.contains("terms") == hj.contains("factors"))
      fail("hypersurface", "give exactly one of \"terms\" or \"factors\"");
    std::vector<MPoly> factors;
    if (hj.contains("terms")) {
      factors.push_back(parse_terms(hj["terms"], "hypersurface.terms", n));
    } else {
      const auto& fj = hj["factors"];
      if (!fj.is_array() || fj.empty()) fail("hypersurface.factors", "expected a non-empty list");
      for (std::size_t k = 0; k < fj.size(); ++k)
        factors.push_back(parse_terms(fj[k], "hypersurface.factors[" + std::to_string(k) + "]", n));
    }
    for (const auto& f : factors)
      if (f.is_zero()) fail("hypersurface", "T must not be identically zero");
    try {
      s.hypersurface.emplace(std::move(factors), floor);
    } catch (const ValidationError& e) {
      fail("hypersurface", e.what());
    }
  }

  if (j.contains("sequences")) {
    const auto& sj = j["sequences"];
    if (!sj.is_object()) fail("sequences", "expected an object of named point lists");
    for (const auto& [name, v] : sj.items()) {
      auto seq = parse_sequence(v, "sequences." + name);
      seq.label = name;
      s.sequences.emplace(name, std::move(seq));
    }
  }

  if (j.contains("product_sequence")) {
    const auto& pj = j["product_sequence"];
    check_keys(pj, "product_sequence", {"gamma", "lambdas"});
    if (n != 2) fail("product_sequence", "requires dimension 2");
    if (!pj.contains("gamma") || !pj.contains("lambdas")) fail("product_sequence", "needs gamma and lambdas");
    auto gamma = parse_sequence(pj["gamma"], "product_sequence.gamma");
    const auto& lj = pj["lambdas"];
    if (!lj.is_array()) fail("product_sequence.lambdas", "expected a list of point lists");
    std::vector<Sequence1D> lambdas;
    for (std::size_t k = 0; k < lj.size(); ++k)
      lambdas.push_back(parse_sequence(lj[k], "product_sequence.lambdas[" + std::to_string(k) + "]"));
    if (lambdas.size() != gamma.size())
      fail("product_sequence.lambdas", "need one block per gamma point");
    s.product_sequence.emplace(std::move(gamma), std::move(lambdas));
  }

  if (j.contains("defaults")) {
    const auto& dj = j["defaults"];
    check_keys(dj, "defaults", {"budget", "seed"});
    if (dj.contains("budget")) {
      if (!dj["budget"].is_number_integer() || dj["budget"].get<long long>() < 1)
        fail("defaults.budget", "expected a positive integer");
      s.defaults.budget = dj["budget"].get<int>();
    }
    if (dj.contains("seed")) {
      if (!dj["seed"].is_number_unsigned() && !(dj["seed"].is_number_integer() && dj["seed"].get<long long>() >= 0))
        fail("defaults.seed", "expected a non-negative integer");
      s.defaults.seed = dj["seed"].get<std::uint64_t>();
    }
  }

  if (!s.hypersurface && s.sequences.empty() && !s.product_sequence)
    fail("scene", "no analysis target (hypersurface, sequences or product_sequence)");
  return s;
}

Scene parse_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scene: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scene: malformed JSON in " + path + ": " + e.what());
  }
  return parse_scene_json(j);
}

json scene_to_json(const Scene& s) {
  json j;
  j["dimension"] = s.dimension;
  if (s.weight.kind() == WeightKind::euclidean) {
    j["weight"] = {{"kind", "euclidean"}};
  } else {
    json q = json::array();
    const cmat m = s.weight.levi().matrix();
    for (int r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
      q.push_back(row);
    }
    j["weight"] = {{"kind", "quadratic"}, {"Q", q}, {"h", terms_to_json(s.weight.pluriharmonic())}};
  }
  if (s.hypersurface) {
    json f = json::array();
    for (const auto& p : s.hypersurface->factors()) f.push_back(terms_to_json(p));
    j["hypersurface"] = {{"factors", f}, {"gradient_floor", s.hypersurface->gradient_floor()}};
  }
  if (!s.sequences.empty()) {
    json sj = json::object();
    for (const auto& [name, seq] : s.sequences) sj[name] = sequence_to_json(seq);
    j["sequences"] = sj;
  }
  if (s.product_sequence) {
    json l = json::array();
    for (const auto& lam : s.product_sequence->lambdas) l.push_back(sequence_to_json(lam));
    j["product_sequence"] = {{"gamma", sequence_to_json(s.product_sequence->gamma)}, {"lambdas", l}};
  }
  j["defaults"] = {{"budget", s.defaults.budget}, {"seed", s.defaults.seed}};
  return j;
}

namespace {

std::vector<std::string> content_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

std::vector<double> reals(const std::string& line, const std::string& where) {
  std::istringstream is(line);
  std::vector<double> v;
  double x;
  while (is >> x) v.push_back(x);
  if (!is.eof()) throw ValidationError(where + ": not a list of numbers: '" + line + "'");
  return v;
}

cplx complex_line(const std::string& line, const std::string& where) {
  const auto v = reals(line, where);
  if (v.size() != 2) throw ValidationError(where + ": expected 're im', got '" + line + "'");
  return {v[0], v[1]};
}

}  // namespace

Sequence1D read_sequence_file(const std::string& path) {
  std::vector<cplx> pts;
  const auto lines = content_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i)
    pts.push_back(complex_line(lines[i], path + ":" + std::to_string(i + 1)));
  return Sequence1D(std::move(pts), path);
}

ProductSequence read_product_sequence_file(const std::string& path) {
  std::vector<cplx> gamma;
  std::vector<std::vector<cplx>> lambdas;
  int section = -1;  // 0: gamma, 1: lambda
  for (const auto& line : content_lines(path)) {
    if (line == "[gamma]") {
      if (section != -1) throw ValidationError(path + ": [gamma] must come first and only once");
      section = 0;
    } else if (line == "[lambda]") {
      if (section == -1) throw ValidationError(path + ": [lambda] before [gamma]");
      section = 1;
      lambdas.emplace_back();
    } else if (section == 0) {
      gamma.push_back(complex_line(line, path));
    } else if (section == 1) {
      lambdas.back().push_back(complex_line(line, path));
    } else {
      throw ValidationError(path + ": data before the [gamma] header");
    }
  }
  std::vector<Sequence1D> ls;
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    ls.emplace_back(std::move(lambdas[k]), "lambda" + std::to_string(k));
  return ProductSequence(Sequence1D(std::move(gamma), "gamma"), std::move(ls));
}

std::vector<cvec> read_points_file(const std::string& path, int n) {
  std::vector<cvec> out;
  const auto lines = content_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto v = reals(lines[i], path + ":" + std::to_string(i + 1));
    if (static_cast<int>(v.size()) != 2 * n)
      throw ValidationError(path + ":" + std::to_string(i + 1) + ": expected " + std::to_string(2 * n) +
                            " numbers");
    cvec p(n);
    for (int k = 0; k < n; ++k) p[k] = cplx(v[2 * k], v[2 * k + 1]);
    out.push_back(p);
  }
  return out;
}

}  // namespace fockdens
