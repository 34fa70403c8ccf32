// End-to-end checks of the vkt binary: exit codes, file outputs, report text.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout and stderr combined

  bool contains(const std::string& needle) const {
    return output.find(needle) != std::string::npos;
  }
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(VKT_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return RunResult{code, std::move(out)};
}

std::string sample(const std::string& name) {
  return (fs::path(SAMPLES_DIR) / name).string();
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::current_path() / "cli_scratch";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("transform writes the spectral file") {
  const auto out = scratch() / "t1";
  const auto r = run("transform -o " + out.string() + " " + sample("haar.vsf"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.contains("wrote "));
  REQUIRE(read_file(out / "haar_hat.vsf") == "vsf1 p=2 side=dual window=0:0\n0.0 1 0\n");

  const auto inv = run("transform --inverse -o " + out.string() + " " +
                       (out / "haar_hat.vsf").string());
  REQUIRE(inv.exit_code == 0);
  REQUIRE(read_file(out / "haar_hat_inv.vsf") == read_file(sample("haar.vsf")));
}

TEST_CASE("transform oracle cross-check") {
  const auto out = scratch() / "t2";
  const auto r =
      run("transform --oracle -o " + out.string() + " " + sample("nonparseval.vsf"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.contains("oracle deviation: 0"));
}

TEST_CASE("transform rejects the wrong side") {
  const auto out = scratch() / "t3";
  const auto r = run("transform -o " + out.string() + " " + sample("blocked_m.vsf"));
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.contains("primal-side"));
  const auto r2 = run("transform --inverse -o " + out.string() + " " + sample("haar.vsf"));
  REQUIRE(r2.exit_code == 2);
}

TEST_CASE("unusable input exits 2") {
  const auto bad = scratch() / "bad.vsf";
  std::ofstream(bad) << "vsf1 p=4 side=primal window=0:0\n";
  REQUIRE(run("analyze " + bad.string()).exit_code == 2);
  REQUIRE(run("transform " + scratch().string() + "/missing.vsf").exit_code == 2);
  REQUIRE(run("transform").exit_code == 2);  // missing required argument
  REQUIRE(run("no-such-command x.vsf").exit_code == 2);
  REQUIRE(run("--help").exit_code == 0);
}

TEST_CASE("analyze reports the frame data") {
  const auto r = run("analyze " + sample("haar.vsf"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.contains("frame_lower: 1\n"));
  REQUIRE(r.contains("frame_upper: 1\n"));
  REQUIRE(r.contains("zero_set: (empty)"));
  REQUIRE(r.contains("spectrum: 0.0"));
  REQUIRE(r.contains("parseval: true"));
  REQUIRE(r.contains("orthonormal: true"));

  const auto h = run("analyze " + sample("halfband.vsf"));
  REQUIRE(h.exit_code == 0);
  REQUIRE(h.contains("parseval: true"));
  REQUIRE(h.contains("orthonormal: false"));
  REQUIRE(h.contains("zero_set: 0.1"));

  const auto np = run("analyze " + sample("nonparseval.vsf"));
  REQUIRE(np.exit_code == 0);
  REQUIRE(np.contains("frame_lower: 0.25\n"));
  REQUIRE(np.contains("frame_upper: 1\n"));
  REQUIRE(np.contains("parseval: false"));
}

TEST_CASE("analyze rejects an empty generator") {
  const auto r = run("analyze " + sample("zero.vsf"));
  REQUIRE(r.exit_code == 4);
  REQUIRE(r.contains("empty support"));
}

TEST_CASE("analyze emits csv plot data") {
  const auto r = run("analyze --csv " + sample("haar.vsf"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.output.rfind("lambda_star,value_re,value_im\n", 0) == 0);
  REQUIRE(r.contains("\n0,1,0\n"));
  REQUIRE(r.contains("\n0.0625,1,0\n"));
  // header plus one row per cell at the default resolution 4
  REQUIRE(std::count(r.output.begin(), r.output.end(), '\n') == 17);

  const auto r1 = run("analyze --csv -r 1 " + sample("haar.vsf"));
  REQUIRE(std::count(r1.output.begin(), r1.output.end(), '\n') == 3);
  REQUIRE(r1.contains("\n0.5,1,0\n"));
  REQUIRE(run("analyze -r 0 " + sample("haar.vsf")).exit_code == 2);
}

TEST_CASE("wavelet constructs and certifies") {
  const auto out = scratch() / "w1";
  const auto r = run("wavelet -o " + out.string() + " " + sample("haar.vsf"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.contains("certificate: pass"));
  REQUIRE(read_file(out / "haar_psi.vsf") ==
          "vsf1 p=2 side=primal window=-2:1\n00.0 -1 0\n00.1 1 0\n");
  const auto cert = read_file(out / "haar_certificate.json");
  REQUIRE(cert.find("\"passed\": true") != std::string::npos);
  REQUIRE(cert.find("\"region_violation\": 0.0") != std::string::npos);

  const auto h = run("wavelet -o " + out.string() + " " + sample("halfband.vsf"));
  REQUIRE(h.exit_code == 0);
  REQUIRE(h.contains("certificate: pass"));
  REQUIRE(h.contains("bounds: input [1, 1] output [1, 1]"));

  const auto np = run("wavelet -o " + out.string() + " " + sample("nonparseval.vsf"));
  REQUIRE(np.exit_code == 0);
  REQUIRE(np.contains("certificate: pass"));
}

TEST_CASE("wavelet accepts an explicit filter") {
  const auto out = scratch() / "w2";
  const auto r = run("wavelet -m " + sample("haar_filter.vsf") + " -o " + out.string() + " " +
                     sample("haar.vsf"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.contains("certificate: pass"));

  // a filter that does not refine the generator fails the hypothesis
  const auto wrong = run("wavelet -m " + sample("halfband_filter.vsf") + " -o " +
                         out.string() + " " + sample("haar.vsf"));
  REQUIRE(wrong.exit_code == 8);

  // filters must be dual-side periodic files
  const auto bad = run("wavelet -m " + sample("haar.vsf") + " -o " + out.string() + " " +
                       sample("haar.vsf"));
  REQUIRE(bad.exit_code == 2);
}

TEST_CASE("wavelet reports the blocked set") {
  const auto out = scratch() / "w3";
  const auto r = run("wavelet -o " + out.string() + " " + sample("blocked_phihat.vsf"));
  REQUIRE(r.exit_code == 5);
  // minimal filter lands at resolution 4, so the set prints as four cells
  REQUIRE(r.contains("blocked cells: 0.1000 0.1001 0.1010 0.1011"));

  const auto rm = run("wavelet -m " + sample("blocked_m.vsf") + " -o " + out.string() + " " +
                      sample("blocked_phihat.vsf"));
  REQUIRE(rm.exit_code == 5);
  REQUIRE(rm.contains("blocked cells: 0.100 0.101"));
}

TEST_CASE("wavelet requires the dyadic group") {
  const auto r = run("wavelet " + sample("haar_p3.vsf"));
  REQUIRE(r.exit_code == 6);
  REQUIRE(r.contains("p = 2"));
}

TEST_CASE("mra-lift produces an orthonormal generator") {
  const auto out = scratch() / "l1";
  const auto r = run("mra-lift -o " + out.string() + " " + sample("halfband.vsf"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.contains("stratum 0: 0.0\n"));
  REQUIRE(r.contains("stratum 1: 0.1\n"));
  REQUIRE(r.contains("refinement residual: 0\n"));
  REQUIRE(r.contains("lifted orthonormal: true"));
  REQUIRE(read_file(out / "halfband_lifted.vsf") ==
          "vsf1 p=2 side=primal window=-1:0\n0.0 1 0\n");
  REQUIRE(read_file(out / "halfband_lifted_filter.vsf") ==
          "vsf1 p=2 side=dual window=0:2\n0.00 1 0\n0.01 1 0\n");

  const auto id = run("mra-lift -o " + out.string() + " " + sample("haar.vsf"));
  REQUIRE(id.exit_code == 0);
  REQUIRE(read_file(out / "haar_lifted.vsf") == read_file(sample("haar.vsf")));
}

TEST_CASE("mra-lift rejects non-parseval input") {
  REQUIRE(run("mra-lift " + sample("scaled2.vsf")).exit_code == 8);
  REQUIRE(run("mra-lift " + sample("nonparseval.vsf")).exit_code == 8);
}
