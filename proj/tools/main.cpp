// Command-line front end. All experiment parameters live in a JSON config
// document; flags only pick the subcommand, the config path, the output
// directory, worker count, and the verify filter. Exit codes are a stable
// contract: 0 success, 1 runtime or check failure, 2 validation failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "stableheat/bounds.hpp"
#include "stableheat/config.hpp"
#include "stableheat/errors.hpp"
#include "stableheat/mc.hpp"
#include "stableheat/util.hpp"

namespace {

using namespace stableheat;

void write_text(const std::filesystem::path& dir, const char* name, const std::string& body)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory \"" + dir.string() +
                                 "\": " + ec.message());
    const std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out)
        throw std::runtime_error("failed writing \"" + path.string() + "\"");
    std::cout << path.string() << "\n";
}

std::filesystem::path pick_out_dir(const std::string& flag, const RunConfig& config)
{
    return flag.empty() ? std::filesystem::path(config.output_directory)
                        : std::filesystem::path(flag);
}

int cmd_sample(const std::string& config_path, const std::string& out_flag)
{
    const RunConfig config = config_from_file(config_path);
    const NoiseField field = sample_field(config.noise, config.domain, config.noise_seed);
    std::ostringstream csv;
    write_field_csv(csv, field);
    write_text(pick_out_dir(out_flag, config), "fields.csv", csv.str());
    return 0;
}

int cmd_kernel_eval(const std::string& config_path, const std::string& out_flag)
{
    const RunConfig config = config_from_file(config_path);
    const SolverConfig& s = config.solver_required("kernel-eval");
    const KernelSpec spec = config.kernel_spec();
    const TimeGrid time{s.t, s.time_steps};
    const int d = config.domain.dim();

    std::ostringstream csv;
    csv << "t";
    for (int a = 1; a <= d; ++a)
        csv << ",x_" << a;
    for (int a = 1; a <= d; ++a)
        csv << ",y_" << a;
    csv << ",value\n";
    for (int k = 1; k <= time.steps; ++k)
        for (const Point& x : s.points)
            for (const Point& y : s.points) {
                csv << fmt17(time.node(k));
                for (int a = 0; a < d; ++a)
                    csv << ',' << fmt17(x[a]);
                for (int a = 0; a < d; ++a)
                    csv << ',' << fmt17(y[a]);
                csv << ',' << fmt17(kernel_value(time.node(k), x, y, spec)) << '\n';
            }
    if (out_flag.empty())
        std::cout << csv.str();
    else
        write_text(out_flag, "kernel.csv", csv.str());
    return 0;
}

int cmd_solve(const std::string& config_path, const std::string& out_flag)
{
    const RunConfig config = config_from_file(config_path);
    const SolverConfig& s = config.solver_required("solve");
    const NoiseField field = sample_field(config.noise, config.domain, config.noise_seed);
    const KernelSpec spec = config.kernel_spec();
    const Grids grids = config.grids();
    const DriftChannel drift = config.drift_channel();
    const ScalarField u0 = s.u0.make(config.domain);
    const int d = config.domain.dim();
    const char* mode_name = s.mode == ProductMode::Star ? "star" : "diamond";

    std::ostringstream csv;
    csv << "mode,n,t";
    for (int a = 1; a <= d; ++a)
        csv << ",x_" << a;
    csv << ",term_value,partial_sum\n";
    for (const Point& point : s.points) {
        const SeriesResult series =
            solve_series(field, u0, s.n_max, s.t, point, s.mode, spec, grids, drift);
        for (int n = 0; n <= s.n_max; ++n) {
            csv << mode_name << ',' << n << ',' << fmt17(s.t);
            for (int a = 0; a < d; ++a)
                csv << ',' << fmt17(point[a]);
            csv << ',' << fmt17(series.terms[n]) << ',' << fmt17(series.partial_sums[n])
                << '\n';
        }
        if (!series.regime_note.empty())
            std::cerr << "note: " << series.regime_note << "\n";
    }
    write_text(pick_out_dir(out_flag, config), "series.csv", csv.str());
    return 0;
}

int cmd_verify(const std::string& check_filter, double tolerance, bool tolerance_set,
               const std::string& out_flag)
{
    const auto rows =
        run_checks(check_filter, tolerance_set ? std::optional<double>(tolerance)
                                               : std::optional<double>());
    std::ostringstream csv;
    csv << "check_name,arguments,lhs,rhs,pass\n";
    bool all_pass = true;
    for (const CheckRow& row : rows) {
        csv << row.check_name << ',' << row.arguments << ',' << fmt17(row.lhs) << ','
            << fmt17(row.rhs) << ',' << (row.pass ? "true" : "false") << '\n';
        all_pass = all_pass && row.pass;
    }
    std::cout << csv.str();
    if (!out_flag.empty())
        write_text(out_flag, "verify.csv", csv.str());
    return all_pass ? 0 : 1;
}

int cmd_mc(const std::string& config_path, const std::string& out_flag, int threads)
{
    RunConfig config = config_from_file(config_path);
    if (!out_flag.empty())
        config.output_directory = out_flag;
    run_experiment(config, threads);
    std::cout << (std::filesystem::path(config.output_directory) / "manifest.json").string()
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Truncated one-sided stable noise fields and chaos-expansion heat "
                 "solutions on a box"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_flag;
    std::string check_filter;
    double tolerance = 0.0;
    int threads = 1;

    CLI::App* sample = app.add_subcommand("sample", "Sample one atom field to fields.csv");
    sample->add_option("--config", config_path, "JSON config path")->required();
    sample->add_option("--out", out_flag, "Output directory (default: config output.directory)");

    CLI::App* kernel_eval = app.add_subcommand(
        "kernel-eval", "Tabulate the heat kernel over the configured time nodes and "
                       "ordered point pairs");
    kernel_eval->add_option("--config", config_path, "JSON config path")->required();
    kernel_eval->add_option("--out", out_flag, "Write kernel.csv here instead of stdout");

    CLI::App* solve = app.add_subcommand("solve", "Expansion terms for one sampled field "
                                                  "to series.csv");
    solve->add_option("--config", config_path, "JSON config path")->required();
    solve->add_option("--out", out_flag, "Output directory (default: config output.directory)");

    CLI::App* verify =
        app.add_subcommand("verify", "Run the closed-form estimate checks (CSV on stdout)");
    verify->add_option("--check", check_filter, "Run only the named check");
    CLI::Option* tol_opt = verify->add_option(
        "--tolerance", tolerance, "Override every check's default tolerance");
    verify->add_option("--out", out_flag, "Also write verify.csv here");

    CLI::App* mc = app.add_subcommand("mc", "Replicated experiment: fields/series/moments/"
                                            "verify CSVs plus manifest.json");
    mc->add_option("--config", config_path, "JSON config path")->required();
    mc->add_option("--out", out_flag, "Output directory (default: config output.directory)");
    mc->add_option("--threads", threads, "Worker threads (results are thread-count invariant)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sample->parsed())
            return cmd_sample(config_path, out_flag);
        if (kernel_eval->parsed())
            return cmd_kernel_eval(config_path, out_flag);
        if (solve->parsed())
            return cmd_solve(config_path, out_flag);
        if (verify->parsed())
            return cmd_verify(check_filter, tolerance, !tol_opt->empty(), out_flag);
        if (mc->parsed())
            return cmd_mc(config_path, out_flag, threads);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
