// End-to-end checks of the zo binary: exit codes, CSV schema, determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("zo_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
  }
};

const Scratch& scratch() {
  static Scratch s;
  return s;
}

int zo(const std::string& args, const std::string& stdout_name = "stdout.txt") {
  const std::string cmd = std::string(ZO_BINARY) + " " + args + " > " +
                          (scratch().dir / stdout_name).string() + " 2> " +
                          (scratch().dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kGood = R"(name = smoke
kind = tau_mse_sweep
objective = quadratic
d = 8
mu = 1e-4
tau = 1e-4
batch = 4, 8
schemes = uniform, gaussian, dap_exact, dap_estimated
seeds = 1..2
)";

}  // namespace

TEST_CASE("run writes the csv and exits 0") {
  const auto cfg = scratch().write("good.cfg", kGood);
  const auto out = scratch().dir / "good.csv";
  REQUIRE(zo("run " + cfg.string() + " --out " + out.string()) == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("experiment,scheme,d,delta,mu,batch,seed,step,metric,value\n", 0) == 0);
  std::size_t rows = 0;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) rows += line.find(",tau_mse,") != std::string::npos;
  CHECK(rows == 4 * 2 * 2);
}

TEST_CASE("run is byte-identical across invocations") {
  const auto cfg = scratch().write("det.cfg", kGood);
  const auto a = scratch().dir / "a.csv", b = scratch().dir / "b.csv";
  REQUIRE(zo("run " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(zo("run " + cfg.string() + " --out " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("config errors exit 2") {
  const auto out = (scratch().dir / "never.csv").string();
  std::string bad_scheme = kGood;
  bad_scheme.replace(bad_scheme.find("dap_estimated"), 13, "sobol");
  CHECK(zo("run " + scratch().write("s.cfg", bad_scheme).string() + " --out " + out) == 2);
  CHECK(slurp(scratch().dir / "stderr.txt").find("sobol") != std::string::npos);

  std::string bad_obj = kGood;
  bad_obj.replace(bad_obj.find("quadratic"), 9, "rosenbrock");
  CHECK(zo("run " + scratch().write("o.cfg", bad_obj).string() + " --out " + out) == 2);
  CHECK(zo("run " + (scratch().dir / "missing.cfg").string() + " --out " + out) == 2);
  CHECK(zo("run " + scratch().write("junk.cfg", "this is not a config\n").string() + " --out " + out) == 2);
  CHECK(zo("frobnicate") == 2);
  CHECK(zo("run") == 2);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("divergence exits 3") {
  const auto cfg = scratch().write("div.cfg", R"(name = boom
kind = optimize
objective = sphere
d = 4
eta = 50
steps = 200
schemes = uniform
)");
  CHECK(zo("run " + cfg.string() + " --out " + (scratch().dir / "div.csv").string()) == 3);
  CHECK(zo("run " + scratch().write("ok.cfg", kGood).string() + " --out /nonexistent/dir/x.csv") == 3);
}

TEST_CASE("verify passes, is deterministic, and catches the injected fault") {
  REQUIRE(zo("verify", "v1.txt") == 0);
  REQUIRE(zo("verify", "v2.txt") == 0);
  const std::string v1 = slurp(scratch().dir / "v1.txt");
  CHECK(v1 == slurp(scratch().dir / "v2.txt"));
  CHECK(v1.find("FAIL") == std::string::npos);

  CHECK(zo("verify --inject-gaussian-fault", "fault.txt") == 1);
  const std::string fault = slurp(scratch().dir / "fault.txt");
  CHECK(fault.find("FAIL  gaussian exceeds min variance") != std::string::npos);
  CHECK(slurp(scratch().dir / "stderr.txt").find("gaussian exceeds min variance") != std::string::npos);

  CHECK(zo("verify --seed 12345", "v3.txt") == 0);
  CHECK(slurp(scratch().dir / "v3.txt") != v1);
}
