// vkt: batch front end for the vilenkin library.
//
//   vkt transform [--inverse] [--oracle] <in.vsf>
//   vkt analyze [--csv] <in.vsf>
//   vkt wavelet [-m <filter.vsf>] <phi.vsf>
//   vkt mra-lift <phi.vsf>
//
// Exit codes: 0 ok, 2 unusable input, 3 oracle mismatch, 4 empty support,
// 5 blocked cells, 6 unsupported modulus, 7 strata not covering, 8 input
// fails the standing hypothesis (not Parseval / not refinable).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vilenkin/vilenkin.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace vilenkin;

namespace {

constexpr int kExitUsable = 2;
constexpr int kExitOracle = 3;
constexpr int kExitEmpty = 4;
constexpr int kExitBlocked = 5;
constexpr int kExitModulus = 6;
constexpr int kExitStrata = 7;
constexpr int kExitHypothesis = 8;

struct Options {
  std::string input;
  std::string filter;       // wavelet only
  std::string out_dir = ".";
  int resolution = 4;       // analysis table resolution
  double tolerance = 1e-12;
  bool inverse = false;
  bool oracle = false;
  bool csv = false;
};

std::string stem_of(const std::string& path) {
  fs::path p(path);
  return p.stem().string();
}

fs::path out_path(const Options& opt, const std::string& name) {
  fs::create_directories(opt.out_dir);
  return fs::path(opt.out_dir) / name;
}

StepFunction load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path);
  return read_vsf(is);
}

double lambda_star(const StepFunction& f, std::uint64_t idx) {
  return lambda_map(f.cell_representative(idx)).to_double();
}

std::string pattern_string(const PeriodicSet& s, std::uint64_t pattern) {
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(s.resolution()));
  for (int t = s.resolution() - 1; t >= 0; --t) {
    digits[static_cast<std::size_t>(t)] =
        static_cast<std::uint8_t>(pattern % static_cast<std::uint64_t>(s.modulus()));
    pattern /= static_cast<std::uint64_t>(s.modulus());
  }
  return CosetId(s.modulus(), s.side(), 0, s.resolution(), std::move(digits)).to_string();
}

std::string set_string(const PeriodicSet& s) {
  if (s.is_empty()) return "(empty)";
  std::string out;
  for (auto pat : s.patterns()) {
    if (!out.empty()) out += " ";
    out += pattern_string(s, pat);
  }
  return out;
}

ordered_json set_json(const PeriodicSet& s) {
  ordered_json cells = ordered_json::array();
  for (auto pat : s.patterns()) cells.push_back(pattern_string(s, pat));
  return ordered_json{
      {"resolution", s.resolution()}, {"measure", s.measure()}, {"cells", cells}};
}

int run_transform(const Options& opt) {
  const StepFunction f = load(opt.input);
  if (!opt.inverse && f.side() != Side::primal) {
    std::cerr << "transform expects a primal-side input (use --inverse for dual)\n";
    return kExitUsable;
  }
  if (opt.inverse && f.side() != Side::dual) {
    std::cerr << "--inverse expects a dual-side input\n";
    return kExitUsable;
  }
  const StepFunction g = opt.inverse ? inverse_fourier(f) : fourier(f);
  if (opt.oracle) {
    const double dev = max_abs_diff(g, slow_fourier(f));
    std::printf("oracle deviation: %s\n", format_double(dev).c_str());
    if (dev > opt.tolerance) {
      std::cerr << "oracle mismatch exceeds tolerance\n";
      return kExitOracle;
    }
  }
  const fs::path out =
      out_path(opt, stem_of(opt.input) + (opt.inverse ? "_inv.vsf" : "_hat.vsf"));
  write_vsf_file(g, out.string());
  std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

int run_analyze(const Options& opt) {
  const StepFunction f = load(opt.input);
  if (f.is_zero()) {
    std::cerr << "empty support\n";
    return kExitEmpty;
  }
  const FrameReport fr = frame_report(f);
  const int R = std::max(opt.resolution, fr.gramian.resolution());
  const FilterSpec P = fr.gramian.refine(R);
  const StepFunction& table = P.restriction();
  if (opt.csv) {
    std::printf("lambda_star,value_re,value_im\n");
    for (std::uint64_t idx = 0; idx < table.span(); ++idx) {
      const auto v = table.coeff(idx);
      std::printf("%s,%s,%s\n", format_double(lambda_star(table, idx)).c_str(),
                  format_double(v.real()).c_str(), format_double(v.imag()).c_str());
    }
    return 0;
  }
  std::printf("input: p=%d side=%s window=%d:%d cells=%zu\n", f.modulus(),
              side_name(f.side()), f.window_lo(), f.window_hi(), f.cells().size());
  std::printf("periodization resolution: %d\n", R);
  for (std::uint64_t idx = 0; idx < table.span(); ++idx) {
    const auto v = table.coeff(idx);
    std::printf("  %s  lambda_star=%s  P=%s\n", table.cell_id(idx).to_string().c_str(),
                format_double(lambda_star(table, idx)).c_str(),
                format_double(v.real()).c_str());
  }
  std::printf("frame_lower: %s\n", format_double(fr.lower).c_str());
  std::printf("frame_upper: %s\n", format_double(fr.upper).c_str());
  std::printf("zero_set: %s\n", set_string(fr.zero_set).c_str());
  std::printf("spectrum: %s\n", set_string(fr.gramian.support()).c_str());
  std::printf("bessel: %s\n", fr.bessel ? "true" : "false");
  std::printf("frame: %s\n", fr.frame ? "true" : "false");
  std::printf("parseval: %s\n", fr.parseval ? "true" : "false");
  std::printf("orthonormal: %s\n", fr.orthonormal ? "true" : "false");
  return 0;
}

int run_wavelet(const Options& opt) {
  const StepFunction f = load(opt.input);
  if (f.modulus() != 2) {
    std::cerr << "wavelet construction requires p = 2\n";
    return kExitModulus;
  }
  const FrameReport fr = frame_report(f);
  std::optional<FilterSpec> m;
  if (!opt.filter.empty()) {
    const StepFunction mf = load(opt.filter);
    if (mf.side() != Side::dual || mf.window_lo() != 0) {
      std::cerr << "filter must be a dual-side file with window 0:r\n";
      return kExitUsable;
    }
    m.emplace(mf);
  } else {
    m.emplace(minimal_filter(f, f, 1));
  }
  const WaveletCertificate cert = construct_wavelet(f, *m, fr.lower, fr.upper);
  std::printf("delta2: %s\n", set_string(cert.deltas.delta2).c_str());
  std::printf("delta1: %s\n", set_string(cert.deltas.delta1).c_str());
  std::printf("blocked measure: 0\n");
  std::printf("bounds: input [%s, %s] output [%s, %s]\n",
              format_double(cert.input_lower).c_str(),
              format_double(cert.input_upper).c_str(),
              format_double(cert.output_lower).c_str(),
              format_double(cert.output_upper).c_str());
  std::printf("region violation: %s\n", format_double(cert.region_violation).c_str());
  std::printf("orthogonality residual: %s\n",
              format_double(cert.orthogonality_residual).c_str());
  std::printf("certificate: %s\n", cert.passed ? "pass" : "fail");

  const fs::path psi_path = out_path(opt, stem_of(opt.input) + "_psi.vsf");
  write_vsf_file(cert.psi, psi_path.string());
  std::printf("wrote %s\n", psi_path.string().c_str());

  ordered_json doc{
      {"input",
       ordered_json{{"path", opt.input},
                    {"frame_lower", cert.input_lower},
                    {"frame_upper", cert.input_upper}}},
      {"delta2", set_json(cert.deltas.delta2)},
      {"delta1", set_json(cert.deltas.delta1)},
      {"eta_w0", set_json(cert.eta_w0)},
      {"bounds",
       ordered_json{{"output_lower", cert.output_lower},
                    {"output_upper", cert.output_upper}}},
      {"checks",
       ordered_json{{"region_violation", cert.region_violation},
                    {"orthogonality_residual", cert.orthogonality_residual},
                    {"support_ok", cert.support_ok},
                    {"dims_ok", cert.dims_ok},
                    {"passed", cert.passed}}},
  };
  const fs::path cert_path = out_path(opt, stem_of(opt.input) + "_certificate.json");
  std::ofstream os(cert_path);
  os << doc.dump(2) << "\n";
  std::printf("wrote %s\n", cert_path.string().c_str());
  return cert.passed ? 0 : 1;
}

int run_mra_lift(const Options& opt) {
  const StepFunction f = load(opt.input);
  const MRALift lift = fmra_to_mra(f);
  const FrameReport fr = frame_report(lift.varphi_hat);
  for (std::size_t j = 0; j < lift.strata.size(); ++j)
    std::printf("stratum %zu: %s\n", j, set_string(lift.strata[j]).c_str());
  std::printf("refinement residual: %s\n",
              format_double(lift.refinement_residual).c_str());
  std::printf("lifted orthonormal: %s\n", fr.orthonormal ? "true" : "false");
  if (!fr.orthonormal || lift.refinement_residual > opt.tolerance) {
    std::cerr << "lift failed to produce orthonormal translates\n";
    return kExitStrata;
  }
  const fs::path phi_path = out_path(opt, stem_of(opt.input) + "_lifted.vsf");
  write_vsf_file(lift.varphi, phi_path.string());
  std::printf("wrote %s\n", phi_path.string().c_str());
  const fs::path m_path = out_path(opt, stem_of(opt.input) + "_lifted_filter.vsf");
  write_vsf_file(lift.m_varphi.restriction(), m_path.string());
  std::printf("wrote %s\n", m_path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral toolkit for p-adic digit-sequence groups"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("input", opt.input, "input .vsf file")->required();
    cmd->add_option("-o,--out-dir", opt.out_dir, "output directory");
    cmd->add_option("--tolerance", opt.tolerance, "residual tolerance")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* transform = app.add_subcommand("transform", "forward or inverse transform");
  add_common(transform);
  transform->add_flag("--inverse", opt.inverse, "apply the inverse transform");
  transform->add_flag("--oracle", opt.oracle, "cross-check against direct summation");

  CLI::App* analyze = app.add_subcommand("analyze", "periodization and frame report");
  add_common(analyze);
  analyze->add_flag("--csv", opt.csv, "emit plot data as CSV");
  analyze->add_option("-r,--resolution", opt.resolution, "table resolution")
      ->check(CLI::Range(1, 20));

  CLI::App* wavelet = app.add_subcommand("wavelet", "construct the frame wavelet (p = 2)");
  add_common(wavelet);
  wavelet->add_option("-m,--filter", opt.filter, "refinement filter .vsf file");

  CLI::App* lift = app.add_subcommand("mra-lift", "lift a Parseval generator to an MRA");
  add_common(lift);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints usage or help text
    return code == 0 ? 0 : kExitUsable;
  }

  try {
    if (transform->parsed()) return run_transform(opt);
    if (analyze->parsed()) return run_analyze(opt);
    if (wavelet->parsed()) return run_wavelet(opt);
    if (lift->parsed()) return run_mra_lift(opt);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsable;
  } catch (const BlockedSetError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "blocked cells: " << set_string(e.blocked) << "\n";
    return kExitBlocked;
  } catch (const StrataCoverageError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "uncovered cells: " << set_string(e.uncovered) << "\n";
    return kExitStrata;
  } catch (const NotParsevalError& e) {
    std::cerr << e.what() << "\n";
    return kExitHypothesis;
  } catch (const NotInSpaceError& e) {
    std::cerr << e.what() << "\n";
    return kExitHypothesis;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
