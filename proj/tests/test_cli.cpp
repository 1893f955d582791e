#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace std::string_literals;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir(const char* tag)
    {
        path = fs::temp_directory_path() / (std::string("stableheat_cli_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

/// Runs the installed binary with shell-level redirection and returns the
/// exit code plus captured streams.
RunResult run_cli(const std::string& args, const TempDir& dir)
{
    const fs::path out = dir.path / "stdout.txt";
    const fs::path err = dir.path / "stderr.txt";
    const std::string cmd = "\""s + STABLEHEAT_CLI_PATH + "\" " + args + " > \"" +
                            out.string() + "\" 2> \"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

fs::path write_config(const TempDir& dir, const char* name, const std::string& body)
{
    const fs::path path = dir.path / name;
    std::ofstream out(path);
    out << body;
    REQUIRE(out.good());
    return path;
}

const char* kBasicConfig = R"({
  "noise": {"p": 0.5, "eps": 0.25, "K": 4.0, "seed": 42},
  "domain": {"lower": [0.0], "upper": [1.0]},
  "kernel": {"space_grid_resolution": 16},
  "solver": {"N_max": 2, "t": 0.25, "time_steps": 8, "points": [[0.3], [0.7]]},
  "mc": {"replicates": 3, "master_seed": 5}
})";

int line_count(const std::string& text)
{
    int lines = 0;
    for (char c : text)
        if (c == '\n')
            ++lines;
    return lines;
}

} // namespace

TEST_CASE("cli: sample writes a deterministic atom table")
{
    TempDir dir("sample");
    const fs::path cfg = write_config(dir, "cfg.json", kBasicConfig);
    const RunResult a =
        run_cli("sample --config \"" + cfg.string() + "\" --out \"" + (dir.path / "a").string() +
                    "\"",
                dir);
    REQUIRE(a.code == 0);
    CHECK(a.out.find("fields.csv") != std::string::npos);
    const RunResult b =
        run_cli("sample --config \"" + cfg.string() + "\" --out \"" + (dir.path / "b").string() +
                    "\"",
                dir);
    REQUIRE(b.code == 0);
    const std::string csv_a = slurp(dir.path / "a" / "fields.csv");
    CHECK(csv_a == slurp(dir.path / "b" / "fields.csv"));
    CHECK(csv_a.rfind("atom_index,x_1,mass,type_index", 0) == 0);
    CHECK(line_count(csv_a) > 1); // expected around 3 atoms at these parameters
}

TEST_CASE("cli: an empty truncation band samples an empty table")
{
    TempDir dir("empty");
    const fs::path cfg = write_config(dir, "cfg.json", R"({
      "noise": {"p": 0.5, "eps": 4.0, "K": 4.0},
      "domain": {"lower": [0.0], "upper": [1.0]}
    })");
    const RunResult r = run_cli(
        "sample --config \"" + cfg.string() + "\" --out \"" + dir.path.string() + "\"", dir);
    REQUIRE(r.code == 0);
    CHECK(line_count(slurp(dir.path / "fields.csv")) == 1); // header only
}

TEST_CASE("cli: invalid parameters exit with code 2 and no output files")
{
    TempDir dir("invalid");
    const fs::path cfg = write_config(dir, "cfg.json", R"({
      "noise": {"p": 1.0, "eps": 0.25, "K": 4.0},
      "domain": {"lower": [0.0], "upper": [1.0]}
    })");
    const fs::path out = dir.path / "out";
    const RunResult r = run_cli(
        "sample --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"", dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("validation error") != std::string::npos);
    CHECK(!fs::exists(out / "fields.csv"));
}

TEST_CASE("cli: argument errors exit with code 2")
{
    TempDir dir("args");
    CHECK(run_cli("sample", dir).code == 2);           // missing --config
    CHECK(run_cli("frobnicate", dir).code == 2);       // unknown subcommand
    CHECK(run_cli("", dir).code == 2);                 // subcommand required
    CHECK(run_cli("--help", dir).code == 0);
    const RunResult missing =
        run_cli("solve --config \"" + (dir.path / "nope.json").string() + "\"", dir);
    CHECK(missing.code == 2);
    CHECK(missing.err.find("cannot open") != std::string::npos);
}

TEST_CASE("cli: solve reports terms and partial sums per point")
{
    TempDir dir("solve");
    const fs::path cfg = write_config(dir, "cfg.json", kBasicConfig);
    const RunResult r = run_cli(
        "solve --config \"" + cfg.string() + "\" --out \"" + dir.path.string() + "\"", dir);
    REQUIRE(r.code == 0);
    const std::string csv = slurp(dir.path / "series.csv");
    CHECK(csv.rfind("mode,n,t,x_1,term_value,partial_sum", 0) == 0);
    CHECK(line_count(csv) == 1 + 2 * 3); // two points, orders 0..2
    CHECK(csv.find("star,0,") != std::string::npos);
    CHECK(r.err.empty()); // inside the star regime: no note
}

TEST_CASE("cli: kernel-eval tabulates the grid times and point pairs")
{
    TempDir dir("kernel");
    const fs::path cfg = write_config(dir, "cfg.json", kBasicConfig);
    const RunResult r = run_cli("kernel-eval --config \"" + cfg.string() + "\"", dir);
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("t,x_1,y_1,value", 0) == 0);
    CHECK(line_count(r.out) == 1 + 8 * 2 * 2); // steps x ordered pairs

    // --out redirects the same bytes into kernel.csv.
    const RunResult w = run_cli(
        "kernel-eval --config \"" + cfg.string() + "\" --out \"" + dir.path.string() + "\"",
        dir);
    REQUIRE(w.code == 0);
    const std::string file = slurp(dir.path / "kernel.csv");
    CHECK(r.out == file);
}

TEST_CASE("cli: verify filters by check name and honors the tolerance override")
{
    TempDir dir("verify");
    const RunResult all = run_cli("verify", dir);
    CHECK(all.code == 0);
    CHECK(all.out.rfind("check_name,arguments,lhs,rhs,pass", 0) == 0);

    const RunResult one = run_cli("verify --check beta_identity", dir);
    CHECK(one.code == 0);
    std::istringstream lines(one.out);
    std::string line;
    std::getline(lines, line); // header
    int rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.rfind("beta_identity,", 0) == 0);
        ++rows;
    }
    CHECK(rows > 0);

    // Nothing meets a zero tolerance; the exit code reports the failures.
    const RunResult strict = run_cli("verify --check beta_identity --tolerance 0", dir);
    CHECK(strict.code == 1);
    CHECK(strict.out.find(",false") != std::string::npos);

    const RunResult saved =
        run_cli("verify --out \"" + dir.path.string() + "\"", dir);
    CHECK(saved.code == 0);
    const std::string file = slurp(dir.path / "verify.csv");
    CHECK(saved.out.rfind(file, 0) == 0); // stdout = csv then the written path
}

TEST_CASE("cli: mc writes the experiment set and prints the manifest path")
{
    TempDir dir("mc");
    const fs::path cfg = write_config(dir, "cfg.json", kBasicConfig);
    const RunResult r = run_cli("mc --config \"" + cfg.string() + "\" --out \"" +
                                    dir.path.string() + "\" --threads 2",
                                dir);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("manifest.json") != std::string::npos);
    for (const char* name : {"fields.csv", "series.csv", "moments.csv", "verify.csv",
                             "manifest.json"})
        CHECK(fs::exists(dir.path / name));
    CHECK(run_cli("mc --config \"" + cfg.string() + "\" --threads 0", dir).code == 2);
}
