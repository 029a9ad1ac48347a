// End-to-end checks of the command line tool. Invoked as: cli_tests <path-to-cli>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

#define EXPECT(cond, msg)                                                      \
  do {                                                                         \
    if (!(cond)) {                                                             \
      std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << (msg)    \
                << "\n";                                                       \
      ++g_failures;                                                            \
    }                                                                          \
  } while (0)

std::string g_cli;
fs::path g_dir;

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  const fs::path out = g_dir / "stdout.txt";
  const fs::path err = g_dir / "stderr.txt";
  const std::string cmd =
      g_cli + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (const char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

void test_help() {
  EXPECT(run("--help").exit_code == 0, "--help exits 0");
  for (const std::string sub :
       {"sample", "distance", "contact", "pgf", "pgfl", "validate"}) {
    const RunResult r = run(sub + " --help");
    EXPECT(r.exit_code == 0, sub + " --help exits 0");
    EXPECT(r.out.find("--help") != std::string::npos, sub + " help lists flags");
  }
  EXPECT(run("sample --help").out.find("--seed") != std::string::npos,
         "sample help documents --seed");
  EXPECT(run("contact --help").out.find("--check") != std::string::npos,
         "contact help documents --check");
  EXPECT(run("nonsense").exit_code == 1, "unknown subcommand exits 1");
  EXPECT(run("sample").exit_code == 1, "missing required option exits 1");
}

void test_sample() {
  const fs::path a = g_dir / "a.csv";
  const fs::path b = g_dir / "b.csv";
  const std::string base =
      "sample --lambda-p 2e-5 --window 60 --mode mcph-exact --seed 9 --out ";
  EXPECT(run(base + a.string()).exit_code == 0, "sample exits 0");
  EXPECT(run(base + b.string()).exit_code == 0, "sample rerun exits 0");
  EXPECT(slurp(a) == slurp(b), "fixed seed reruns are byte-identical");
  EXPECT(run("sample --lambda-p 2e-5 --window 60 --mode mcph-exact --seed 10 --out " +
             b.string())
                 .exit_code == 0,
         "reseeded sample exits 0");
  EXPECT(slurp(a) != slurp(b), "different seeds give different realizations");

  const RunResult empty = run("sample --lambda-p 0 --window 60 --seed 1 --out " +
                              (g_dir / "empty.csv").string());
  EXPECT(empty.exit_code == 0, "zero intensity exits 0");
  EXPECT(empty.out.find("parents=0") != std::string::npos, "zero parents reported");
  EXPECT(slurp(g_dir / "empty.csv") == "kind,x,y,z,parent_index,thinned\n",
         "empty realization is header-only");

  // retained points stay clear of every hole
  struct Row {
    double x, y, z;
    bool parent, thinned;
  };
  std::vector<Row> rows;
  std::istringstream in(slurp(a));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto f = split(line, ',');
    rows.push_back({std::stod(f[1]), std::stod(f[2]), std::stod(f[3]),
                    f[0] == "parent", f[5] == "1"});
  }
  bool ok = true;
  for (const Row& o : rows) {
    if (o.parent || o.thinned) continue;
    for (const Row& p : rows) {
      if (!p.parent) continue;
      const double dx = o.x - p.x, dy = o.y - p.y, dz = o.z - p.z;
      if (dx * dx + dy * dy + dz * dz < 15.0 * 15.0) ok = false;
    }
  }
  EXPECT(ok, "no retained offspring sits inside a hole");
  EXPECT(fs::exists(a.string() + ".meta.json"), "sample writes metadata");
}

void test_distance() {
  const fs::path out = g_dir / "dist.csv";
  const RunResult r = run(
      "distance --process mcph --x-norm 20 --grid 0:70:0.5 --out " + out.string());
  EXPECT(r.exit_code == 0, "distance exits 0");
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  EXPECT(line == "r,pdf,cdf,case_no,branch_no", "distance header");
  std::getline(in, line);
  EXPECT(line.rfind("0,0,0,", 0) == 0, "first row has zero density and mass");
  double prev_cdf = -1.0;
  std::size_t rows = 1;
  bool monotone = true;
  while (std::getline(in, line)) {
    const auto f = split(line, ',');
    const double cdf = std::stod(f[2]);
    if (cdf < prev_cdf - 1e-12) monotone = false;
    prev_cdf = cdf;
    ++rows;
  }
  EXPECT(monotone, "cdf column is nondecreasing");
  EXPECT(rows == 141, "grid row count");

  EXPECT(run("distance --process mcp --hole-correction --x-norm 20 --out " +
             (g_dir / "x.csv").string())
                 .exit_code == 1,
         "hole correction is rejected for the plain process");
}

void test_contact() {
  const fs::path out = g_dir / "contact.csv";
  const RunResult analytic = run(
      "contact --process mcph --lambda-p 2e-5 --grid 0:100:1 --out " + out.string());
  EXPECT(analytic.exit_code == 0, "analytic contact exits 0");
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  EXPECT(line == "r,F_CD", "contact header");
  std::getline(in, line);
  EXPECT(line == "0,0", "contact starts at zero");

  const std::string mc_base =
      "contact --process mcp --r0 0 --m1 20 --lambda-p 1e-5 --grid 0:100:2 "
      "--window 200 --mc 2000 --workers 2 --seed 3 --out ";
  const RunResult pass = run(mc_base + out.string() + " --check 3 0.05");
  EXPECT(pass.exit_code == 0, "well-calibrated check passes");
  EXPECT(slurp(out).find("r,F_CD,empirical,se") == 0, "overlay header");
  EXPECT(slurp(out.string() + ".meta.json").find("\"pass\": true") !=
             std::string::npos,
         "check result recorded in metadata");

  const RunResult fail = run(mc_base + out.string() + " --check 3 1e-9");
  EXPECT(fail.exit_code == 3, "unreachable sup threshold exits 3");

  const RunResult guard = run(
      "contact --process mcp --grid 0:180:2 --window 200 --mc 100 --seed 3 --out " +
      out.string());
  EXPECT(guard.exit_code == 1, "grid beyond the censoring guard exits 1");

  // reruns are pure in (config, seed)
  const fs::path rerun = g_dir / "contact_rerun.csv";
  run(mc_base + rerun.string());
  const std::string first = slurp(rerun);
  run(mc_base + rerun.string());
  EXPECT(first == slurp(rerun), "contact rerun is byte-identical");

  // a near-empty process censors; --strict escalates the warning
  const std::string sparse =
      "contact --process mcp --lambda-p 1e-7 --grid 0:10:5 --window 60 --mc 50 "
      "--seed 3 --out " +
      out.string();
  const RunResult warned = run(sparse);
  EXPECT(warned.exit_code == 0, "censoring alone only warns");
  EXPECT(warned.err.find("censored") != std::string::npos, "warning mentions censoring");
  EXPECT(run(sparse + " --strict").exit_code == 3, "--strict escalates censoring");
}

void test_pgf_and_pgfl() {
  const fs::path out = g_dir / "pgf.csv";
  const RunResult r = run(
      "pgf --process mcp --r0 0 --m1 20 --r 30 --theta-grid 0:1:0.25 --out " +
      out.string());
  EXPECT(r.exit_code == 0, "pgf exits 0");
  const auto lines = split(slurp(out), '\n');
  EXPECT(lines[0] == "theta,G_N", "pgf header");
  EXPECT(lines[5].rfind("1,1", 0) == 0, "G_N(1) = 1");
  const double void_prob = std::stod(split(lines[1], ',')[1]);

  const RunResult one = run("pgfl --process mcp --r0 0 --m1 20 --profile indicator "
                            "--theta 1 --r 30");
  EXPECT(one.exit_code == 0, "pgfl exits 0");
  EXPECT(one.out.find("value=1") != std::string::npos, "unit profile gives 1");

  const RunResult ind = run(
      "pgfl --process mcp --r0 0 --m1 20 --profile indicator --theta 0 --r 30 "
      "--meta " +
      (g_dir / "pgfl.json").string());
  EXPECT(ind.exit_code == 0, "indicator pgfl exits 0");
  const std::string prefix = "value=";
  const auto pos = ind.out.find(prefix);
  EXPECT(pos != std::string::npos, "pgfl prints its value");
  const double value = std::stod(ind.out.substr(pos + prefix.size()));
  EXPECT(std::abs(value - void_prob) < 1e-6, "pgfl matches the count PGF at theta=0");
  EXPECT(ind.out.find("exact=true") != std::string::npos, "plain process is exact");
  EXPECT(slurp(g_dir / "pgfl.json").find("truncation_radius") != std::string::npos,
         "pgfl metadata records the truncation radius");

  EXPECT(run("pgfl --profile bogus").exit_code == 1, "unknown profile exits 1");
  EXPECT(run("pgfl --profile exp-power --alpha 2").exit_code == 1,
         "non-integrable exponent exits 1");
}

void test_config_file() {
  const fs::path cfg = g_dir / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# config for a sparse run\n";
    f << "lambda-p=3e-5\n";
    f << "seed=5\n";
  }
  const fs::path out = g_dir / "cfg.csv";
  const RunResult from_cfg = run("sample --config " + cfg.string() +
                                 " --window 40 --out " + out.string());
  EXPECT(from_cfg.exit_code == 0, "config file run exits 0");
  EXPECT(slurp(out.string() + ".meta.json").find("\"lambda_p\": 3e-05") !=
             std::string::npos,
         "config value lands in the effective config");

  const RunResult overridden =
      run("sample --config " + cfg.string() + " --lambda-p 4e-5 --window 40 --out " +
          out.string());
  EXPECT(overridden.exit_code == 0, "override run exits 0");
  EXPECT(slurp(out.string() + ".meta.json").find("\"lambda_p\": 4e-05") !=
             std::string::npos,
         "command line overrides the config file");
}

void test_validate_quick() {
  const fs::path rep1 = g_dir / "rep1.json";
  const fs::path rep2 = g_dir / "rep2.json";
  const std::string base = "validate --trials 60 --seed 31 --out ";
  const RunResult a = run(base + rep1.string() + " --workers 2");
  EXPECT(a.exit_code == 0 || a.exit_code == 3, "validate exits 0 or 3");
  EXPECT(a.out.find("criterion 1") != std::string::npos, "per-criterion lines");
  EXPECT(a.out.find("criterion 9") != std::string::npos, "all criteria reported");
  const RunResult b = run(base + rep2.string() + " --workers 1");
  EXPECT(slurp(rep1) == slurp(rep2),
         "validate report is byte-identical across reruns and worker counts");
  EXPECT(a.out == b.out, "validate stdout is reproducible");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <path-to-cli>\n";
    return 2;
  }
  g_cli = argv[1];
  g_dir = fs::temp_directory_path() / "mcph_cli_tests";
  fs::remove_all(g_dir);
  fs::create_directories(g_dir);

  test_help();
  test_sample();
  test_distance();
  test_contact();
  test_pgf_and_pgfl();
  test_config_file();
  test_validate_quick();

  fs::remove_all(g_dir);
  if (g_failures == 0) {
    std::cout << "cli tests passed\n";
    return 0;
  }
  std::cerr << g_failures << " cli test failure(s)\n";
  return 1;
}
