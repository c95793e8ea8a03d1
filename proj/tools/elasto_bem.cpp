// elasto-bem: config-driven assembly and verification runs.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ebem/campaigns.hpp"
#include "ebem/elastic2d.hpp"

using namespace ebem;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";

class ConfigError : public Error {
 public:
  using Error::Error;
};

// task check failed; carries the failing check name
class CheckFailed : public Error {
 public:
  using Error::Error;
};

struct Config {
  // geometry
  std::string builtin = "icosphere";
  int level = 2;
  std::string msh;
  int segments = 64;
  // physics
  WaveParams prm;
  // discretization
  int quadrature_degree = 6;
  double eta = 2.0;
  int singular_order = 5;
  // task
  std::vector<double> offsets = {0.125};
  std::vector<int> levels;
  std::vector<double> radii = {3.0};
  std::string op = "single_layer";
  std::string trial = "P1", test = "P1", side = "plus";
  int samples = 12;
  int pairs = 20;
  unsigned seed = 1;
  double tolerance = -1;  // task default when negative
  // output
  std::set<std::string> formats = {"csv", "matrix"};

  json resolved;
};

const std::map<std::string, std::set<std::string>> kSchema = {
    {"geometry", {"builtin", "level", "msh", "segments"}},
    {"physics", {"omega", "rho", "mu", "lambda"}},
    {"discretization", {"quadrature_degree", "eta", "singular_order"}},
    {"task", {"offsets", "levels", "radii", "operator", "trial", "test", "side", "samples", "pairs", "seed",
              "tolerance"}},
    {"output", {"formats"}},
};

template <class T>
void take(const json& sec, const std::string& section, const char* key, T& out) {
  if (!sec.contains(key)) return;
  try {
    out = sec.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(section + "." + key + ": wrong type");
  }
}

Config parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (auto& [name, sec] : j.items()) {
    auto it = kSchema.find(name);
    if (it == kSchema.end()) throw ConfigError("unknown config key: " + name);
    if (!sec.is_object()) throw ConfigError(name + " must be an object");
    for (auto& [key, v] : sec.items())
      if (!it->second.count(key)) throw ConfigError("unknown config key: " + name + "." + key);
  }
  const json empty = json::object();
  auto section = [&](const char* s) -> const json& { return j.contains(s) ? j.at(s) : empty; };

  Config c;
  const json& g = section("geometry");
  take(g, "geometry", "builtin", c.builtin);
  take(g, "geometry", "level", c.level);
  take(g, "geometry", "msh", c.msh);
  take(g, "geometry", "segments", c.segments);
  if (!c.msh.empty() && g.contains("builtin")) throw ConfigError("geometry.msh and geometry.builtin are exclusive");
  if (!c.msh.empty()) c.builtin = "msh";
  if (!std::set<std::string>{"icosphere", "cube", "circle", "none", "msh"}.count(c.builtin))
    throw ConfigError("geometry.builtin: expected icosphere, cube, circle or none");
  if (c.level < 0 || c.level > 5) throw ConfigError("geometry.level must be in [0, 5]");
  if (c.segments < 3) throw ConfigError("geometry.segments must be at least 3");

  const json& ph = section("physics");
  take(ph, "physics", "omega", c.prm.omega);
  take(ph, "physics", "rho", c.prm.rho);
  take(ph, "physics", "mu", c.prm.mu);
  take(ph, "physics", "lambda", c.prm.lambda);
  try {
    c.prm.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("physics.") + e.what());
  }

  const json& d = section("discretization");
  take(d, "discretization", "quadrature_degree", c.quadrature_degree);
  take(d, "discretization", "eta", c.eta);
  take(d, "discretization", "singular_order", c.singular_order);
  if (c.quadrature_degree < 1 || c.quadrature_degree > 20) throw ConfigError("discretization.quadrature_degree must be in [1, 20]");
  if (!(c.eta > 0)) throw ConfigError("discretization.eta must be positive");
  if (c.singular_order < 1 || c.singular_order > 20) throw ConfigError("discretization.singular_order must be in [1, 20]");

  const json& t = section("task");
  take(t, "task", "offsets", c.offsets);
  take(t, "task", "levels", c.levels);
  take(t, "task", "radii", c.radii);
  take(t, "task", "operator", c.op);
  take(t, "task", "trial", c.trial);
  take(t, "task", "test", c.test);
  take(t, "task", "side", c.side);
  take(t, "task", "samples", c.samples);
  take(t, "task", "pairs", c.pairs);
  take(t, "task", "seed", c.seed);
  take(t, "task", "tolerance", c.tolerance);
  if (c.offsets.empty() || !(c.offsets[0] > 0)) throw ConfigError("task.offsets must hold a positive factor");
  for (double r : c.radii)
    if (!(r > 0)) throw ConfigError("task.radii must be positive");
  for (int l : c.levels)
    if (l < 0 || l > 5) throw ConfigError("task.levels must be in [0, 5]");
  for (const std::string* s : {&c.trial, &c.test})
    if (*s != "P0" && *s != "P1") throw ConfigError("task.trial/test must be P0 or P1");
  if (c.side != "plus" && c.side != "minus") throw ConfigError("task.side must be plus or minus");
  if (c.samples < 1) throw ConfigError("task.samples must be positive");
  if (c.pairs < 1) throw ConfigError("task.pairs must be positive");
  if (c.levels.empty()) c.levels = {c.level};

  const json& o = section("output");
  if (o.contains("formats")) {
    std::vector<std::string> f;
    take(o, "output", "formats", f);
    c.formats = {f.begin(), f.end()};
    for (const auto& s : c.formats)
      if (s != "csv" && s != "matrix") throw ConfigError("output.formats: unknown format " + s);
  }

  c.resolved = {
      {"geometry", {{"builtin", c.builtin}, {"level", c.level}, {"msh", c.msh}, {"segments", c.segments}}},
      {"physics", {{"omega", c.prm.omega}, {"rho", c.prm.rho}, {"mu", c.prm.mu}, {"lambda", c.prm.lambda}}},
      {"discretization",
       {{"quadrature_degree", c.quadrature_degree}, {"eta", c.eta}, {"singular_order", c.singular_order}}},
      {"task",
       {{"offsets", c.offsets}, {"levels", c.levels}, {"radii", c.radii}, {"operator", c.op}, {"trial", c.trial},
        {"test", c.test}, {"side", c.side}, {"samples", c.samples}, {"pairs", c.pairs}, {"seed", c.seed},
        {"tolerance", c.tolerance}}},
      {"output", {{"formats", std::vector<std::string>(c.formats.begin(), c.formats.end())}}},
  };
  return c;
}

struct Row {
  std::string task, check;
  int level = 0;
  double h = 0, value = 0, reference = 0;
  double rate = NAN;
};

class Run {
 public:
  Run(Config cfg, std::string task, fs::path out, int threads)
      : cfg_(std::move(cfg)), task_(std::move(task)), out_(std::move(out)), threads_(threads) {
    aopt_.threads = threads;
    aopt_.far_degree = cfg_.quadrature_degree;
    aopt_.ss_order = cfg_.singular_order;
    eopt_.threads = threads;
    eopt_.near.eta = cfg_.eta;
  }

  int execute() {
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec) throw IoError("cannot create output directory " + out_.string() + ": " + ec.message());
    int status = 0;
    std::string failed;
    try {
      if (task_ == "kernels-selftest")
        kernels_selftest();
      else if (task_ == "assemble")
        assemble();
      else if (task_ == "jumps")
        jumps();
      else if (task_ == "somigliana")
        somigliana();
      else if (task_ == "identities")
        identities();
      else if (task_ == "convergence")
        convergence();
      else
        throw ConfigError("unknown task " + task_);
    } catch (const CheckFailed& e) {
      status = 1;
      failed = e.what();
    }
    write_report();
    write_manifest(failed);
    if (status) std::cerr << "elasto-bem: check failed: " << failed << "\n";
    return status;
  }

 private:
  Config cfg_;
  std::string task_;
  fs::path out_;
  int threads_;
  AssemblyOptions aopt_;
  EvalOptions eopt_;
  std::vector<Row> rows_;
  std::vector<std::string> outputs_;
  std::vector<std::string> failures_;

  bool surface() const { return cfg_.builtin != "circle" && cfg_.builtin != "none"; }

  SurfaceMesh mesh_at(int level) const {
    if (cfg_.builtin == "icosphere") return icosphere(level);
    if (cfg_.builtin == "cube") return cube(1 << level);
    if (cfg_.builtin == "msh") return load_msh(cfg_.msh);
    throw ConfigError("task " + task_ + " needs a surface geometry (geometry.builtin icosphere/cube or geometry.msh)");
  }

  std::vector<int> levels() const {
    if (cfg_.builtin == "msh") return {0};
    return cfg_.levels;
  }

  Curve2D curve() const {
    if (cfg_.builtin != "circle") throw ConfigError("geometry.builtin must be circle for 2D operators");
    return regular_polygon(cfg_.segments);
  }

  double tol(double fallback) const { return cfg_.tolerance >= 0 ? cfg_.tolerance : fallback; }

  Row& add(const std::string& check, int level, double h, double value, double reference) {
    rows_.push_back({task_, check, level, h, value, reference});
    return rows_.back();
  }

  // error rows: value is the error, compared against a bound
  void add_error(const std::string& check, int level, double h, double err, double bound) {
    Row& r = add(check, level, h, err, 0.0);
    // rate against the previous row of the same check
    for (auto it = rows_.rbegin() + 1; it != rows_.rend(); ++it)
      if (it->check == check && it->h > h && it->value > 0 && err > 0) {
        r.rate = std::log(it->value / err) / std::log(it->h / h);
        break;
      }
    if (!(err <= bound)) failures_.push_back(check + " at level " + std::to_string(level));
  }

  void finish() {
    if (!failures_.empty()) throw CheckFailed(failures_.front());
  }

  void save(const std::string& name, const DenseOperator& op) {
    if (!cfg_.formats.count("matrix")) return;
    const fs::path p = out_ / (name + ".ebm");
    write_matrix(p.string(), op);
    outputs_.push_back(p.filename().string());
    outputs_.push_back(p.filename().string() + ".json");
  }

  void kernels_selftest() {
    const KernelSelftest k = kernel_selftest(cfg_.prm);
    add_error("helmholtz_residual", 0, 0, k.helmholtz_residual, 1e-5);
    add_error("navier_residual", 0, 0, k.navier_residual, 1e-5);
    add_error("line_integral_2d_kernel", 0, 0, k.line_integral_error, 1e-8);
    // triangle rules on a monomial
    const auto& r = quad::gauss_triangle(cfg_.quadrature_degree);
    double s = 0;
    const int px = cfg_.quadrature_degree / 2, py = cfg_.quadrature_degree - px;
    for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q].x(), px) * std::pow(r.points[q].y(), py);
    // int x^a y^b over the reference triangle = a! b! / (a + b + 2)!
    const double exact = std::tgamma(px + 1) * std::tgamma(py + 1) / std::tgamma(px + py + 3);
    add_error("triangle_rule_monomial", 0, 0, std::abs(s - exact) / exact, 1e-13);
    finish();
  }

  Space space(const std::string& s) const { return s == "P0" ? Space::P0 : Space::P1; }
  Side side() const { return cfg_.side == "plus" ? Side::Plus : Side::Minus; }

  void assemble() {
    DenseOperator op;
    double h = 0;
    const std::string& name = cfg_.op;
    if (cfg_.builtin == "circle") {
      const Curve2D c = curve();
      h = c.h();
      static const std::map<std::string, AntiplaneOp> anti = {{"antiplane_S3", AntiplaneOp::S3},
                                                              {"antiplane_K3", AntiplaneOp::K3},
                                                              {"antiplane_TS3", AntiplaneOp::TS3},
                                                              {"antiplane_TK3", AntiplaneOp::TK3},
                                                              {"antiplane_TK3_ALT", AntiplaneOp::TK3_ALT}};
      static const std::map<std::string, PlaneOp> plane = {
          {"plane_S", PlaneOp::S}, {"plane_K", PlaneOp::K}, {"plane_TS", PlaneOp::TS}, {"plane_TK", PlaneOp::TK}};
      if (anti.count(name))
        op = assemble_antiplane(c, cfg_.prm, anti.at(name), space(cfg_.trial), space(cfg_.test), side());
      else if (plane.count(name))
        op = assemble_plane(c, cfg_.prm, plane.at(name), space(cfg_.trial), side());
      else if (name == "helmholtz_single_layer_2d")
        op = galerkin_single_layer_2d(c, cfg_.prm.kappa_s(), space(cfg_.trial), space(cfg_.test));
      else
        throw ConfigError("task.operator: unknown 2D operator " + name);
    } else {
      const SurfaceMesh m = mesh_at(levels().front());
      h = m.h();
      const double ks = cfg_.prm.kappa_s();
      if (name == "single_layer")
        op = galerkin_S(m, cfg_.prm, space(cfg_.trial), space(cfg_.test), aopt_);
      else if (name == "traction_single_layer")
        op = traction_single_layer_matrix(m, cfg_.prm, space(cfg_.trial), side(), aopt_);
      else if (name == "traction_double_layer_alter")
        op = traction_double_layer(m, cfg_.prm, TractionForm::Alter, side(), aopt_);
      else if (name == "traction_double_layer_v2")
        op = traction_double_layer(m, cfg_.prm, TractionForm::V2, side(), aopt_);
      else if (name == "helmholtz_single_layer")
        op = galerkin_single_layer(m, ks, space(cfg_.trial), space(cfg_.test), aopt_);
      else if (name == "helmholtz_double_layer")
        op = galerkin_double_layer(m, ks, space(cfg_.trial), space(cfg_.test), aopt_);
      else if (name == "helmholtz_adjoint")
        op = galerkin_adjoint(m, ks, space(cfg_.trial), space(cfg_.test), aopt_);
      else if (name == "hypersingular")
        op = hypersingular_hamdi(m, ks, Space::P1, Space::P1, aopt_);
      else if (name == "mass")
        op = mass_matrix(m, space(cfg_.trial), space(cfg_.test));
      else
        throw ConfigError("task.operator: unknown operator " + name);
    }
    add(name + ":frobenius_norm", levels().front(), h, op.A.norm(), NAN);
    add(name + ":rows", levels().front(), h, double(op.rows()), NAN);
    add(name + ":cols", levels().front(), h, double(op.cols()), NAN);
    save(name, op);
  }

  void jumps() {
    JumpOptions o;
    o.samples = cfg_.samples;
    o.delta_factor = cfg_.offsets.front();
    o.eval = eopt_;
    const double bound = tol(0.02);
    for (int l : levels()) {
      const SurfaceMesh m = mesh_at(l);
      const JumpErrors j = jump_campaign(m, cfg_.prm, o);
      add_error("jump_single_layer", l, m.h(), j.single_layer, bound);
      add_error("jump_double_layer", l, m.h(), j.double_layer, bound);
      add_error("jump_traction_single_layer", l, m.h(), j.traction_s, bound);
      add_error("jump_traction_double_layer", l, m.h(), j.traction_k, bound);
    }
    finish();
  }

  std::vector<Vec3> shell(double radius, int n) const {
    std::mt19937 gen(cfg_.seed);
    std::normal_distribution<double> g;
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) pts.push_back(radius * Vec3(g(gen), g(gen), g(gen)).normalized());
    return pts;
  }

  void somigliana() {
    const Vec3 x0(0.1, 0.0, -0.1);
    const CVec3 a(1.0, cplx(0, 0.5), -0.3);
    const double bound = tol(0.05);
    for (double radius : cfg_.radii)
      for (int l : levels()) {
        const SurfaceMesh m = mesh_at(l);
        const double r = somigliana_residual(m, cfg_.prm, x0, a, shell(radius, cfg_.samples), eopt_);
        add_error("somigliana_r" + format_radius(radius), l, m.h(), r, bound);
      }
    finish();
  }

  static std::string format_radius(double r) {
    std::ostringstream os;
    os << r;
    return os.str();
  }

  void identities() {
    if (cfg_.builtin == "circle") {
      const Curve2D c = curve();
      const double h = c.h();
      auto rel = [](const CMatrix& x, const CMatrix& y) { return (x - y).norm() / y.norm(); };
      const CMatrix a = assemble_antiplane(c, cfg_.prm, AntiplaneOp::TK3, Space::P1, Space::P1).A;
      const CMatrix b = assemble_antiplane(c, cfg_.prm, AntiplaneOp::TK3_ALT, Space::P1, Space::P1).A;
      add_error("antiplane_TK3_vs_TK3_ALT", 0, h, rel(a, b), tol(1e-8));
      const CMatrix tp = assemble_antiplane(c, cfg_.prm, AntiplaneOp::TS3, Space::P1, Space::P1, Side::Plus).A;
      const CMatrix tm = assemble_antiplane(c, cfg_.prm, AntiplaneOp::TS3, Space::P1, Space::P1, Side::Minus).A;
      const CMatrix k = assemble_antiplane(c, cfg_.prm, AntiplaneOp::K3, Space::P1, Space::P1).A;
      add_error("antiplane_TS3_principal_vs_minus_K3_transpose", 0, h,
                rel(0.5 * (tp + tm), -k.transpose()), tol(1e-8));
      for (int m : {0, 1}) {
        const cplx v = fourier_mode_eigenvalue(c, cfg_.prm.kappa_s(), m);
        Row& r = add("circle_eigenvalue_mode" + std::to_string(m) + "_abs", 0, h, std::abs(v), NAN);
        (void)r;
      }
      finish();
      return;
    }
    const SurfaceMesh m = mesh_at(levels().front());
    const double h = m.h();
    add_error("guenter_symmetry", 0, h, guenter_symmetry_campaign(m, cfg_.pairs, cfg_.seed), tol(1e-10));

    // bounding radius for exterior sample points
    Vec3 c = Vec3::Zero();
    for (const Vec3& v : m.vertices()) c += v;
    c /= double(m.num_vertices());
    double R = 0;
    for (const Vec3& v : m.vertices()) R = std::max(R, (v - c).norm());
    std::vector<Vec3> pts;
    for (const Vec3& p : shell(1.5 * R, 10)) pts.push_back(c + p);
    const Density psi = Density::interpolate(m, Space::P1, smooth_field_b);
    const VecField k1 = eval_K(m, cfg_.prm, psi, pts, KForm::I, eopt_), k2 = eval_K(m, cfg_.prm, psi, pts, KForm::II, eopt_);
    double worst = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) worst = std::max(worst, (k1[i] - k2[i]).norm() / k2[i].norm());
    add_error("double_layer_form_I_vs_II", 0, h, worst, tol(1e-10));

    const CMatrix tp = traction_single_layer_matrix(m, cfg_.prm, Space::P1, Side::Plus, aopt_).A;
    const CMatrix tm = traction_single_layer_matrix(m, cfg_.prm, Space::P1, Side::Minus, aopt_).A;
    CMatrix mass = CMatrix::Zero(tp.rows(), tp.cols());
    const CMatrix m1 = mass_matrix(m, Space::P1, Space::P1).A;
    const int nv = m.num_vertices();
    for (int k = 0; k < 3; ++k) mass.block(k * nv, k * nv, nv, nv) = m1;
    add_error("traction_single_layer_jump_is_mass", 0, h, (tp - tm - mass).norm() / mass.norm(), tol(1e-10));

    add_error("hamdi_constants_small_kappa", 0, h, hamdi_constant_defect(m, 1e-8, aopt_), tol(1e-8));
    add_error("traction_alter_vs_v2", 0, h, traction_form_difference(m, cfg_.prm, aopt_), tol(1e-3));
    finish();
  }

  void convergence() {
    const Vec3 x0(0.1, 0.0, -0.1);
    const CVec3 a(1.0, cplx(0, 0.5), -0.3);
    const double radius = cfg_.radii.front();
    for (int l : levels()) {
      const SurfaceMesh m = mesh_at(l);
      add_error("somigliana_residual", l, m.h(),
                somigliana_residual(m, cfg_.prm, x0, a, shell(radius, cfg_.samples), eopt_), INFINITY);
      add_error("hypersingular_fd", l, m.h(),
                hypersingular_fd_campaign(m, cfg_.prm.kappa_s(), 2 * cfg_.offsets.front(), aopt_, eopt_), INFINITY);
      add_error("traction_alter_vs_v2", l, m.h(), traction_form_difference(m, cfg_.prm, aopt_), INFINITY);
    }
    // every quantity has to shrink from the coarsest to the finest level
    for (const char* check : {"somigliana_residual", "hypersingular_fd", "traction_alter_vs_v2"}) {
      std::vector<double> v;
      for (const Row& r : rows_)
        if (r.check == check) v.push_back(r.value);
      if (v.size() > 1 && !(v.back() < v.front())) failures_.push_back(std::string(check) + " does not decrease");
    }
    finish();
  }

  void write_report() {
    if (!cfg_.formats.count("csv")) return;
    const fs::path p = out_ / "report.csv";
    std::ofstream os(p);
    if (!os) throw IoError("cannot open " + p.string() + " for writing");
    os << "task,check,level,h,value,reference,abs_err,rel_err,rate\n";
    auto num = [](double v) {
      if (std::isnan(v)) return std::string();
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.10e", v);
      return std::string(buf);
    };
    for (const Row& r : rows_) {
      const bool has_ref = !std::isnan(r.reference);
      const double abs_err = has_ref ? std::abs(r.value - r.reference) : NAN;
      // error rows have reference 0 and report the error itself as relative
      const double rel_err = !has_ref ? NAN : (r.reference != 0 ? abs_err / std::abs(r.reference) : abs_err);
      os << r.task << "," << r.check << "," << r.level << "," << num(r.h) << "," << num(r.value) << ","
         << num(r.reference) << "," << num(abs_err) << "," << num(rel_err) << "," << num(r.rate) << "\n";
    }
    if (!os) throw IoError("write failed: " + p.string());
    outputs_.push_back("report.csv");
  }

  void write_manifest(const std::string& failed) {
    const fs::path p = out_ / "run-manifest.txt";
    std::ofstream os(p);
    if (!os) throw IoError("cannot open " + p.string() + " for writing");
    os << "elasto-bem " << kVersion << "\n";
    os << "eigen " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION << "\n";
    os << "task: " << task_ << "\n";
    os << "threads: " << threads_ << "\n";
    os << "seed: " << cfg_.seed << "\n";
    os << "kappa_p: " << cfg_.prm.kappa_p() << "\n";
    os << "kappa_s: " << cfg_.prm.kappa_s() << "\n";
    os << "quadrature.near_singular_eta: " << eopt_.near.eta << "\n";
    os << "quadrature.far_degree: " << aopt_.far_degree << "\n";
    os << "quadrature.singular_order: " << aopt_.ss_order << "\n";
    os << "status: " << (failed.empty() ? "ok" : "failed: " + failed) << "\n";
    os << "outputs:";
    for (const auto& o : outputs_) os << " " << o;
    os << "\nconfig:\n" << cfg_.resolved.dump(2) << "\n";
    if (!os) throw IoError("write failed: " + p.string());
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic-wave boundary element operators and verification runs"};
  std::string config, task, out;
  int threads = 1;
  app.add_option("--config", config, "JSON configuration file")->required();
  app.add_option("--task", task, "assemble | jumps | somigliana | identities | convergence | kernels-selftest")
      ->required()
      ->check(CLI::IsMember({"assemble", "jumps", "somigliana", "identities", "convergence", "kernels-selftest"}));
  app.add_option("--out", out, "output directory (EBEM_OUT_DIR overrides)")->required();
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (const char* env = std::getenv("EBEM_OUT_DIR"); env && *env) out = env;

  try {
    Config cfg = parse_config(config);
    Run run(std::move(cfg), task, out, threads);
    return run.execute();
  } catch (const ConfigError& e) {
    std::cerr << "elasto-bem: config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "elasto-bem: I/O error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "elasto-bem: unreadable input: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "elasto-bem: " << e.what() << "\n";
    return 1;
  }
}
