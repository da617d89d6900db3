// divischan: classify qubit channels, sweep the model dynamics, sample
// tetrahedron slices, and analyse one-mode Gaussian forms.
//
// Exit codes: 0 ok, 2 parse or invalid input, 3 non-CPTP (non-CP) input with
// the report still printed, 4 Fock truncation insufficient.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "divischan/divisibility.hpp"
#include "divischan/dynmaps.hpp"
#include "divischan/gaussian.hpp"
#include "divischan/io.hpp"

using namespace divischan;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kParse = 2, kNotCptp = 3, kTruncation = 4 };

struct Options {
  std::string input = "-", output = "-", format;
  std::string model = "collision";
  double t0 = 0, t1 = M_PI;
  int steps = 64;
  double sum = 0.4;
  int resolution = 41;
  double alpha = 6, g = 10, omega_a = 5, omega_f = 20, gamma = 1;
  int n_fock = 0;
  std::string action = "tuple";
};

json read_json(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    ss << in.rdbuf();
  }
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw ParseError("cannot write " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_classify(const Options& o, const Tolerance& tol) {
  const PauliTransferMatrix e = channel_from_json(read_json(o.input));
  const DivisibilityReport r = classify(e, tol);
  Sink out(o.output);
  out.os() << report_to_json(r).dump(2) << '\n';
  return r.in_c ? kOk : kNotCptp;
}

int cmd_sweep(const Options& o, const Tolerance& tol) {
  std::function<PauliTransferMatrix(double)> map;
  std::optional<JcModel> jc;
  if (o.model == "collision") {
    map = collision_not_map;
  } else if (o.model == "dephasing") {
    map = [g = o.gamma](double t) { return dephasing_map(t, g); };
  } else if (o.model == "jc") {
    JcParams p;
    p.alpha = o.alpha;
    p.g = o.g;
    p.omega_a = o.omega_a;
    p.omega_f = o.omega_f;
    p.n_fock = o.n_fock;
    jc.emplace(p);
    map = [&jc](double t) { return jc->channel(t); };
  } else {
    throw ParseError("unknown model '" + o.model + "'");
  }
  const auto pts = sweep(map, o.t0, o.t1, o.steps, tol);
  Sink out(o.output);
  if (o.format == "json") {
    json rows = json::array();
    for (const auto& p : pts) {
      json r = {{"t", p.t}};
      if (p.error) {
        r["error"] = *p.error;
      } else {
        r["delta"] = p.report.delta;
        r["chi"] = p.report.chi;
        r["det"] = p.report.det;
        r["lambdas"] = {p.lambdas(0), p.lambdas(1), p.lambdas(2)};
        r["tau"] = {p.tau(0), p.tau(1), p.tau(2)};
      }
      rows.push_back(r);
    }
    out.os() << rows.dump(2) << '\n';
  } else {
    write_trajectory_csv(out.os(), pts);
  }
  return kOk;
}

std::string slice_label(const Vec3& l, const Tolerance& tol, bool& eb) {
  eb = false;
  if (tetrahedron_margins(l).minCoeff() < -tol.tol) return "non-CP";
  const DivisibilityReport r = classify(PauliTransferMatrix::diagonal(l(0), l(1), l(2)), tol);
  if (!r.in_c) return "non-CP";
  eb = r.eb;
  if (r.in_l == Tri::yes) return "L";
  if (r.in_cp == Tri::yes) return "CP\\L";
  if (r.in_p) return "P\\CP";
  if (r.in_div == Tri::yes) return "div\\P";
  return "indivisible";
}

int cmd_slice(const Options& o, const Tolerance& tol) {
  if (o.resolution < 2) throw ParseError("resolution must be at least 2");
  Sink out(o.output);
  const bool as_json = o.format == "json";
  json rows = json::array();
  if (!as_json) out.os() << "l1,l2,l3,class,eb\n";
  const int n = o.resolution;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double l1 = -1 + 2.0 * i / (n - 1), l2 = -1 + 2.0 * k / (n - 1);
      const double l3 = o.sum - l1 - l2;
      if (std::abs(l3) > 1 + 1e-12) continue;
      const Vec3 l(l1, l2, l3);
      bool eb = false;
      const std::string cls = slice_label(l, tol, eb);
      if (as_json) {
        rows.push_back({{"l1", l1}, {"l2", l2}, {"l3", l3}, {"class", cls}, {"eb", eb}});
      } else {
        out.os() << format_double(l1) << ',' << format_double(l2) << ',' << format_double(l3) << ',' << cls << ','
                 << (eb ? 1 : 0) << '\n';
      }
    }
  }
  if (as_json) out.os() << rows.dump(2) << '\n';
  return kOk;
}

json analyse(const GaussianForm& raw, bool& cp) {
  const GaussianForm f = enforce_tp_hp(raw);
  const GaussianTuple t = tuple_from_form(f);
  json j = tuple_to_json(t);
  cp = is_cp(t);
  j["cp"] = cp;
  j["class"] = to_string(singular_class(t));
  j["form"] = form_to_json(f);
  j["label"] = form_label(f);
  if (auto closed = is_cp_closed_form(f)) j["cp_closed_form"] = *closed;
  return j;
}

int cmd_gaussian(const Options& o) {
  const json in = read_json(o.input);
  json result;
  int code = kOk;
  if (o.action == "tuple" || o.action == "cp" || o.action == "class") {
    bool cp = true;
    result = analyse(form_from_json(in), cp);
    if (!cp) code = kNotCptp;
  } else if (o.action == "concat") {
    if (!in.contains("f1") || !in.contains("f2")) throw ParseError("concat input needs 'f1' and 'f2'");
    const GaussianForm f1 = form_from_json(in.at("f1")), f2 = form_from_json(in.at("f2"));
    const GaussianForm f = concat(f1, f2);
    bool cp = true;
    result = analyse(f, cp);
    result["kind"] = to_string(f.kind);
  } else if (o.action == "master") {
    if (!in.contains("kind") || !in.contains("samples")) throw ParseError("master input needs 'kind' and 'samples'");
    const GaussianForm probe = form_from_json(json{{"kind", in.at("kind")}});
    std::vector<FormSample> path;
    for (const json& s : in.at("samples")) {
      FormSample fs;
      fs.t = s.at("t").get<double>();
      json fj = s.at("form");
      fj["kind"] = in.at("kind");
      fs.form = form_from_json(fj);
      path.push_back(fs);
    }
    const MasterEquationResult r = master_equation(probe.kind, path);
    result["exists"] = r.exists;
    if (!r.exists) {
      result["reason"] = r.reason;
    } else {
      result["ratio"] = r.ratio;
      result["t"] = r.coefficients.t;
      for (size_t k = 0; k < LiouvillianCoefficients::names.size(); ++k) {
        json col = json::array();
        for (const cplx& v : r.coefficients.values[k]) col.push_back({v.real(), v.imag()});
        result["coefficients"][LiouvillianCoefficients::names[k]] = col;
      }
    }
  } else {
    throw ParseError("unknown gaussian action '" + o.action + "'");
  }
  Sink out(o.output);
  out.os() << result.dump(2) << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divisibility classes of qubit and one-mode Gaussian channels"};
  app.footer("Exit codes: 0 success, 2 parse error or invalid input, 3 non-CPTP input (report still printed), "
             "4 Fock truncation insufficient. DIVISCHAN_TOL overrides the numerical tolerance.");
  app.require_subcommand(1);
  Options o;

  auto* classify_cmd = app.add_subcommand("classify", "Classify a qubit channel given as JSON");
  classify_cmd->add_option("--input", o.input, "Channel JSON file, '-' for stdin");
  classify_cmd->add_option("--output", o.output, "Output file, '-' for stdout");

  auto* sweep_cmd = app.add_subcommand("sweep", "Divisibility trajectory of a dynamical map");
  sweep_cmd->add_option("--model", o.model, "collision | jc | dephasing")
      ->check(CLI::IsMember({"collision", "jc", "dephasing"}));
  sweep_cmd->add_option("--t0", o.t0);
  sweep_cmd->add_option("--t1", o.t1);
  sweep_cmd->add_option("--steps", o.steps)->check(CLI::Range(2, 10000000));
  sweep_cmd->add_option("--alpha", o.alpha, "Coherent amplitude (jc)");
  sweep_cmd->add_option("--g", o.g, "Coupling (jc)");
  sweep_cmd->add_option("--omega-a", o.omega_a, "Atomic frequency (jc)");
  sweep_cmd->add_option("--omega-f", o.omega_f, "Field frequency (jc)");
  sweep_cmd->add_option("--n-fock", o.n_fock, "Fock cutoff (jc), 0 for automatic");
  sweep_cmd->add_option("--gamma", o.gamma, "Dephasing rate");
  sweep_cmd->add_option("--output", o.output);
  sweep_cmd->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

  auto* slice_cmd = app.add_subcommand("slice", "Classes on a plane l1+l2+l3 = sum of Pauli channels");
  slice_cmd->add_option("--sum", o.sum);
  slice_cmd->add_option("--resolution", o.resolution)->check(CLI::Range(2, 100000));
  slice_cmd->add_option("--output", o.output);
  slice_cmd->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

  auto* gauss_cmd = app.add_subcommand("gaussian", "Analyse one-mode Gaussian forms");
  gauss_cmd->add_option("action", o.action, "tuple | cp | class | concat | master")
      ->check(CLI::IsMember({"tuple", "cp", "class", "concat", "master"}));
  gauss_cmd->add_option("--input", o.input);
  gauss_cmd->add_option("--output", o.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kParse;
  }

  const Tolerance tol = tolerance_from_env();
  try {
    if (*classify_cmd) return cmd_classify(o, tol);
    if (*sweep_cmd) return cmd_sweep(o, tol);
    if (*slice_cmd) return cmd_slice(o, tol);
    if (*gauss_cmd) return cmd_gaussian(o);
  } catch (const TruncationInsufficient& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTruncation;
  } catch (const NotCPTP& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNotCptp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }
  return kOk;
}
