#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "ccf/errors.hpp"
#include "ccf/extend.hpp"
#include "ccf/gridfn.hpp"
#include "ccf/harness.hpp"
#include "ccf/homomorphism.hpp"
#include "ccf/parallel.hpp"

using namespace ccf;

namespace {

struct Common {
  std::vector<std::size_t> grid;
  double T = 2.0;
  std::vector<std::string> kernels;
  std::string gen = "0,1,2i,1+i";
  std::string out = "-";
  std::string format = "csv";

  Format fmt() const { return format == "json" ? Format::json : Format::csv; }
};

void add_common(CLI::App* app, Common& c, std::vector<std::size_t> default_grid) {
  c.grid = std::move(default_grid);
  app->add_option("--grid", c.grid, "cell counts, comma separated")->delimiter(',')->capture_default_str();
  app->add_option("--T", c.T, "window length")->capture_default_str();
  app->add_option("--kernel", c.kernels, "kernel spec: jalpha:<a>, chi01, chi01^n, kdelta:<d>[@s], subord:<k>, file:<csv>");
  app->add_option("--gen", c.gen, "generator: comma list of complex a_m or l2:<T>:<N>")->capture_default_str();
  app->add_option("--out", c.out, "output path, - for stdout")->capture_default_str();
  app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

std::ostream* open_out(const std::string& path, std::ofstream& file) {
  if (path == "-") return &std::cout;
  file.open(path);
  if (!file) throw IoError("cannot open " + path + " for writing");
  return &file;
}

int finish(const Report& r, const Common& c) {
  write_report(c.out, c.fmt(), r);
  std::cerr << r.suite << ": " << r.records.size() - r.failures() << "/" << r.records.size() << " records pass\n";
  return r.all_pass() ? 0 : 1;
}

Kernel single_kernel(const Common& c, const std::string& fallback) {
  if (c.kernels.size() > 1) throw UsageError("this command takes one --kernel");
  return parse_kernel(c.kernels.empty() ? fallback : c.kernels.front());
}

void write_table_json(std::ostream& os, const PropagatorTable& t) {
  nlohmann::json j;
  j["schema"] = 1;
  j["T"] = t.grid().length();
  j["M"] = t.grid().intervals();
  j["kernel"] = t.kernel() ? t.kernel()->spec() : "delta";
  j["scale"] = t.log_scale() ? "log" : "linear";
  for (std::size_t m = 0; m < t.modes(); ++m) {
    nlohmann::json col;
    col["a"] = {t.generator()[m].real(), t.generator()[m].imag()};
    for (auto v : t.column(m).values()) {
      col["re"].push_back(v.real());
      col["im"].push_back(v.imag());
    }
    j["modes"].push_back(std::move(col));
  }
  os << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_limit_from_env();
  CLI::App app{"Convoluted cosine families: identity checks, extension, functional calculus"};
  app.require_subcommand(1);

  // verify
  Common vc;
  std::string suite = "identities";
  bool corrupt = false;
  int drop = 0;
  auto* verify = app.add_subcommand("verify", "run a verification suite on a grid ladder");
  add_common(verify, vc, {256, 512, 1024});
  verify->add_option("--suite", suite, "identities, duhamel, extension, calculus, kernels or all")
      ->check(CLI::IsMember({"identities", "duhamel", "extension", "calculus", "kernels", "all"}))
      ->capture_default_str();
  verify->add_flag("--corrupt-convolution", corrupt, "negative control: shift convolutions by one node");
  verify->add_option("--drop-term", drop, "negative control: skip one term (1..5) of the extension formula");

  // extend
  Common ec;
  int n_max = 1;
  std::string mode = "analytic";
  auto* extend = app.add_subcommand("extend", "extend k * cosh(a t) from [0, T] to [0, (n+1) T]");
  add_common(extend, ec, {256});
  extend->add_option("--n", n_max, "number of extension steps")->capture_default_str();
  extend->add_option("--mode", mode, "kernel powers: analytic or numeric")
      ->check(CLI::IsMember({"analytic", "numeric"}))
      ->capture_default_str();

  // calculus
  Common cc;
  std::vector<std::string> bumps;
  std::string check = "apply";
  int cn_max = 3;
  double beta = 1.0;
  auto* calc = app.add_subcommand("calculus", "functional calculus of a j_alpha cosine family on bumps");
  add_common(calc, cc, {128});
  calc->add_option("--bump", bumps, "test function a,b,p (repeat for a second bump)");
  calc->add_option("--check", check, "apply, mult, gen or smooth")
      ->check(CLI::IsMember({"apply", "mult", "gen", "smooth"}))
      ->capture_default_str();
  calc->add_option("--n-max", cn_max, "largest kernel power")->capture_default_str();
  calc->add_option("--beta", beta, "smoothing kernel j_beta for --check smooth")->capture_default_str();

  // scenario
  Common sc;
  std::vector<double> times;
  int modes = 30;
  double x_max = 25.0;
  auto* scen = app.add_subcommand("scenario", "closed-form growth scenarios: l2-blowup or mult-exp");
  std::string which;
  scen->add_option("name", which, "l2-blowup or mult-exp")->required()->check(CLI::IsMember({"l2-blowup", "mult-exp"}));
  add_common(scen, sc, {});
  sc.T = 1.0;
  scen->add_option("--times", times, "times, comma separated")->delimiter(',');
  scen->add_option("--modes", modes, "number of modes (l2-blowup)")->capture_default_str();
  scen->add_option("--xmax", x_max, "largest x (mult-exp)")->capture_default_str();

  // convolve
  Common vcv;
  std::string input, op = "star", bump;
  auto* conv = app.add_subcommand("convolve", "convolve a kernel with samples or a bump");
  add_common(conv, vcv, {512});
  conv->add_option("--input", input, "GridFunction CSV (t,re,im)");
  conv->add_option("--bump", bump, "bump a,b,p sampled on --T/--grid");
  conv->add_option("--op", op, "star, dual or cosine")->check(CLI::IsMember({"star", "dual", "cosine"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      RunConfig cfg;
      cfg.ladder = vc.grid;
      cfg.T = vc.T;
      cfg.generator = vc.gen;
      cfg.kernels = vc.kernels;
      cfg.corrupt_convolution = corrupt;
      cfg.drop_term = drop;
      cfg.validate();
      Report r;
      r.suite = suite;
      auto want = [&](const char* s) { return suite == s || suite == "all"; };
      if (want("identities")) r.append(run_identity_suite(cfg));
      if (want("duhamel")) r.append(run_duhamel_suite(cfg));
      if (want("extension")) r.append(run_extension_demo(cfg));
      if (want("calculus")) r.append(run_calculus_suite(cfg));
      if (want("kernels")) r.append(run_kernel_suite(cfg));
      return finish(r, vc);
    }
    if (*extend) {
      if (ec.grid.size() != 1) throw UsageError("extend takes a single --grid value");
      if (n_max < 0) throw UsageError("--n must be >= 0");
      const auto k = single_kernel(ec, "jalpha:1");
      const auto base = convolve_family(base_cosine(DiagonalGenerator::parse(ec.gen), Grid(ec.T, ec.grid[0])), k);
      const auto t = extend_full(base, k, n_max, mode == "analytic" ? PowerMode::analytic : PowerMode::numeric);
      std::ofstream f;
      auto* os = open_out(ec.out, f);
      ec.fmt() == Format::json ? write_table_json(*os, t) : write_csv(*os, t);
      return 0;
    }
    if (*calc) {
      const auto k = single_kernel(cc, "jalpha:1");
      if (bumps.empty()) bumps.push_back("0.2,0.8,8");
      std::vector<TestFunction> fs;
      for (const auto& b : bumps) fs.push_back(TestFunction::parse(b));
      const auto gen = DiagonalGenerator::parse(cc.gen);
      if (check == "apply") {
        if (cc.grid.size() != 1) throw UsageError("--check apply takes a single --grid value");
        const CalculusContext ctx(k, gen, cc.T, cc.grid[0], cn_max);
        std::ofstream f;
        auto* os = open_out(cc.out, f);
        nlohmann::json j;
        if (cc.fmt() == Format::csv) *os << "bump,m,a_re,a_im,re,im\n";
        for (std::size_t b = 0; b < fs.size(); ++b) {
          const auto v = calculus_apply(ctx, fs[b]);
          for (std::size_t m = 0; m < v.size(); ++m) {
            if (cc.fmt() == Format::csv) {
              *os << bumps[b] << ',' << m + 1 << ',' << gen[m].real() << ',' << gen[m].imag() << ',' << v[m].real()
                  << ',' << v[m].imag() << '\n';
            } else {
              j["values"].push_back({{"bump", bumps[b]}, {"m", m + 1}, {"re", v[m].real()}, {"im", v[m].imag()}});
            }
          }
        }
        if (cc.fmt() == Format::json) {
          j["schema"] = 1;
          *os << j.dump(2) << '\n';
        }
        return 0;
      }
      Report r;
      r.suite = "calculus";
      r.environment = {{"kernel", k.spec()}, {"generator", cc.gen}, {"tau", std::to_string(cc.T)}};
      std::vector<double> steps, values;
      for (auto m : cc.grid) {
        const CalculusContext ctx(k, gen, cc.T, m, cn_max);
        double v = 0.0;
        if (check == "mult") {
          v = multiplicativity_residual(ctx, fs[0], fs.size() > 1 ? fs[1] : fs[0]);
        } else if (check == "gen") {
          for (const auto& f : fs) v = std::max(v, generator_residual(ctx, f));
        } else {
          for (const auto& f : fs) v = std::max(v, kernel_smoothing_invariance(ctx, Kernel::jalpha(beta), f));
        }
        steps.push_back(cc.T / static_cast<double>(m));
        values.push_back(v);
      }
      const double p = check == "smooth" ? std::min(2.0, 1.0 + beta) : 2.0;
      const std::string anchor = check == "mult"  ? "C(phi *c psi) = C(phi) C(psi)"
                                 : check == "gen" ? "A C(f) = C(f'') + f'(0)"
                                                  : "C_{k*l}(f) = C_k(f)";
      if (values.size() >= 2) {
        add_ladder(r, LadderSpec{check, anchor, k.spec(), p, p - 0.3, std::nullopt, 1e-11}, cc.grid, steps, values);
      } else {
        r.records.push_back(Record{check, anchor, k.spec(), cc.grid[0], values[0], std::numeric_limits<double>::infinity(),
                                   std::isfinite(values[0]), std::nullopt});
      }
      return finish(r, cc);
    }
    if (*scen) {
      if (which == "l2-blowup") {
        if (times.empty()) times = {0.8 * sc.T, sc.T, 1.2 * sc.T};
        return finish(run_l2_blowup(sc.T, modes, times), sc);
      }
      if (times.empty()) times = {0.0, 0.25, 0.5, 1.0, 1.2};
      return finish(run_mult_exp(x_max, times), sc);
    }
    if (*conv) {
      if (input.empty() == bump.empty()) throw UsageError("give exactly one of --input and --bump");
      if (vcv.grid.size() != 1) throw UsageError("convolve takes a single --grid value");
      const auto k = single_kernel(vcv, "jalpha:1");
      GridFunction u = GridFunction::zeros(Grid(vcv.T, vcv.grid[0]));
      if (!input.empty()) {
        std::ifstream in(input);
        if (!in) throw IoError("cannot open " + input);
        u = read_csv(in);
      } else {
        u = TestFunction::parse(bump).sample(Grid(vcv.T, vcv.grid[0]));
      }
      const GridFunction r = op == "star"   ? convolve(k, u)
                             : op == "dual" ? dual_convolve(k, u)
                                            : cosine_convolve(sample(k, u.grid()), u);
      std::ofstream f;
      auto* os = open_out(vcv.out, f);
      write_csv(*os, r);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
