#include "divischan/io.hpp"

#include <cmath>
#include <cstdio>

namespace divischan {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string("expected a number for ") + what);
  return j.get<double>();
}

cplx complex_entry(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], "real part"), number(j[1], "imaginary part")};
  throw ParseError("complex entries are [re, im] pairs");
}

// -0.0 prints as "-0.0"; adding +0.0 folds it into 0.
double unsigned_zero(double v) { return v + 0.0; }

template <size_t N>
json arr(const std::array<double, N>& a) {
  json out = json::array();
  for (double v : a) out.push_back(unsigned_zero(v));
  return out;
}

json matrix(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(unsigned_zero(m(i, k)));
    out.push_back(row);
  }
  return out;
}

json vec(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(unsigned_zero(v(i)));
  return out;
}

template <size_t N>
void read_array(const json& j, const char* key, std::array<double, N>& dst) {
  if (!j.contains(key)) return;
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != N) throw ParseError(std::string("'") + key + "' must have " + std::to_string(N) + " entries");
  for (size_t i = 0; i < N; ++i) dst[i] = number(a[i], key);
}

}  // namespace

PauliTransferMatrix channel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("repr") || !j.contains("data")) throw ParseError("channel needs 'repr' and 'data'");
  const std::string repr = j.at("repr").get<std::string>();
  const json& d = j.at("data");
  if (!d.is_array()) throw ParseError("'data' must be an array");
  if (repr == "pauli") {
    if (d.size() != 16) throw ParseError("pauli data needs 16 reals");
    Mat4 m;
    for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = number(d[i], "pauli entry");
    return PauliTransferMatrix(m);
  }
  if (repr == "choi") {
    if (d.size() != 16) throw ParseError("choi data needs 16 complex entries");
    ChoiState c;
    for (int i = 0; i < 16; ++i) c.m(i / 4, i % 4) = complex_entry(d[i]);
    return ptm_from_choi(c);
  }
  if (repr == "kraus") {
    KrausSet ks;
    for (const json& k : d) {
      if (!k.is_array() || k.size() != 4) throw ParseError("each Kraus operator needs 4 complex entries");
      Mat2c op;
      for (int i = 0; i < 4; ++i) op(i / 2, i % 2) = complex_entry(k[i]);
      ks.ops.push_back(op);
    }
    if (ks.ops.empty()) throw ParseError("empty Kraus set");
    return ptm_from_kraus(ks);
  }
  throw ParseError("unknown repr '" + repr + "'");
}

json channel_to_json(const PauliTransferMatrix& e) {
  json data = json::array();
  for (int i = 0; i < 16; ++i) data.push_back(e.m(i / 4, i % 4));
  return {{"repr", "pauli"}, {"data", data}};
}

json report_to_json(const DivisibilityReport& r) {
  json j;
  j["in_c"] = r.in_c;
  j["in_div"] = to_string(r.in_div);
  j["in_p"] = r.in_p;
  j["in_cp"] = to_string(r.in_cp);
  j["in_l"] = to_string(r.in_l);
  j["eb"] = r.eb;
  j["delta"] = r.delta;
  j["chi"] = r.chi;
  j["det"] = r.det;
  j["kraus_rank"] = r.kraus_rank;
  j["diagnostics"] = r.diagnostics;
  return j;
}

json to_json(const SpecialOrthogonalForm& f) {
  return {{"lambdas", vec(f.lambdas)}, {"gamma", vec(f.gamma)}, {"r1", matrix(f.r1)}, {"r2", matrix(f.r2)}};
}

json to_json(const LorentzForm& f) {
  return {{"sigma", matrix(f.sigma)}, {"l1", matrix(f.l1)}, {"l2", matrix(f.l2)}, {"alpha", f.alpha},
          {"is_diagonal", f.is_diagonal}};
}

GaussianForm form_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ParseError("form needs 'kind'");
  GaussianForm f;
  const std::string k = j.at("kind").get<std::string>();
  if (k == "gf")
    f.kind = FormKind::GF;
  else if (k == "delta1")
    f.kind = FormKind::DeltaI;
  else if (k == "delta2")
    f.kind = FormKind::DeltaII;
  else
    throw ParseError("unknown form kind '" + k + "'");
  read_array(j, "a", f.a);
  read_array(j, "b", f.b);
  read_array(j, "c", f.c);
  read_array(j, "e", f.e);
  read_array(j, "d", f.d);
  for (auto [key, dst] : {std::pair{"alpha", &f.alpha}, {"beta", &f.beta}, {"gamma", &f.gamma}, {"eta", &f.eta}})
    if (j.contains(key)) *dst = number(j.at(key), key);
  return f;
}

json form_to_json(const GaussianForm& f) {
  json j = {{"kind", to_string(f.kind)}, {"a", arr(f.a)}, {"b", arr(f.b)}, {"c", arr(f.c)},
            {"e", arr(f.e)}, {"d", arr(f.d)}};
  if (f.kind != FormKind::GF) {
    j["alpha"] = unsigned_zero(f.alpha);
    j["beta"] = unsigned_zero(f.beta);
  }
  if (f.kind == FormKind::DeltaII) {
    j["gamma"] = unsigned_zero(f.gamma);
    j["eta"] = unsigned_zero(f.eta);
  }
  return j;
}

json tuple_to_json(const GaussianTuple& t) {
  return {{"T", matrix(t.t)}, {"N", matrix(t.n)}, {"tau", vec(t.tau)}};
}

}  // namespace divischan
