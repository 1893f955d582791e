#include "stableheat/mc.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "stableheat/errors.hpp"
#include "stableheat/util.hpp"

namespace stableheat {

namespace {

namespace fs = std::filesystem;

/// Runs body(r) for r in [0, count) on up to `threads` workers, each
/// writing only to its own indices. Exceptions are rethrown on the caller
/// thread (first by replicate index).
template <typename Body>
void for_each_replicate(int count, int threads, Body&& body)
{
    threads = std::clamp(threads, 1, count);
    if (threads == 1) {
        for (int r = 0; r < count; ++r)
            body(r);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (int w = 0; w < threads; ++w)
        workers.emplace_back([&, w] {
            const int lo = static_cast<int>(static_cast<long long>(count) * w / threads);
            const int hi = static_cast<int>(static_cast<long long>(count) * (w + 1) / threads);
            try {
                for (int r = lo; r < hi; ++r)
                    body(r);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& worker : workers)
        worker.join();
    for (const auto& err : errors)
        if (err)
            std::rethrow_exception(err);
}

bool point_clears_atoms(PointView x, const NoiseField& field)
{
    for (const auto& atom : field.atoms) {
        double dist2 = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) {
            const double diff = x[a] - atom.location[a];
            dist2 += diff * diff;
        }
        if (dist2 < 1e-24)
            return false;
    }
    return true;
}

/// Field for replicate r, with the one-resample rescue applied against the
/// given evaluation points. ok reports whether the returned field clears
/// all of them.
NoiseField replicate_field(const RunConfig& config, int r, const std::vector<Point>& points,
                           bool& ok)
{
    const std::uint64_t seed = stream_seed(config.mc.master_seed, static_cast<std::uint64_t>(r));
    NoiseField field = sample_field(config.noise, config.domain, seed);
    auto clears = [&](const NoiseField& f) {
        for (const auto& point : points)
            if (!point_clears_atoms(point, f))
                return false;
        return true;
    };
    ok = clears(field);
    if (!ok) {
        field = sample_field(config.noise, config.domain, mix64(seed));
        ok = clears(field);
    }
    return field;
}

struct ReplicateSeries {
    bool ok = false;
    NoiseField field;
    /// terms[point][n] and partial[point][n] for n in 0..N_max
    std::vector<std::vector<double>> terms;
    std::vector<std::vector<double>> partial;
};

/// Samples and solves one replicate at every configured point.
ReplicateSeries solve_replicate(const RunConfig& config, int r)
{
    const SolverConfig& s = config.solver_required("mc");
    ReplicateSeries out;
    out.field = replicate_field(config, r, s.points, out.ok);
    if (!out.ok)
        return out;
    const KernelSpec spec = config.kernel_spec();
    const Grids grids = config.grids();
    const DriftChannel drift = config.drift_channel();
    const ScalarField u0 = s.u0.make(config.domain);
    for (const auto& point : s.points) {
        SeriesResult series = solve_series(out.field, u0, s.n_max, s.t, point, s.mode, spec,
                                           grids, drift);
        out.terms.push_back(std::move(series.terms));
        out.partial.push_back(std::move(series.partial_sums));
    }
    return out;
}

MomentEstimate reduce_moment(std::vector<double>& values, const std::vector<char>& ok, int n,
                             double q)
{
    MomentEstimate estimate;
    estimate.order = n;
    estimate.q = q;
    double sum = 0.0;
    int good = 0;
    for (std::size_t r = 0; r < values.size(); ++r) {
        if (!ok[r]) {
            ++estimate.failures;
            continue;
        }
        sum += values[r];
        ++good;
    }
    estimate.replicates = good;
    if (good == 0)
        return estimate;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t r = 0; r < values.size(); ++r)
        if (ok[r]) {
            lo = first ? values[r] : std::min(lo, values[r]);
            hi = first ? values[r] : std::max(hi, values[r]);
            first = false;
        }
    if (lo == hi) {
        // All samples identical (deterministic term): report them exactly
        // instead of letting the running sum introduce last-ulp noise.
        estimate.mean = lo;
        return estimate;
    }
    estimate.mean = sum / good;
    if (good >= 2) {
        double ss = 0.0;
        for (std::size_t r = 0; r < values.size(); ++r)
            if (ok[r]) {
                const double dev = values[r] - estimate.mean;
                ss += dev * dev;
            }
        estimate.std_error = std::sqrt(ss / (good - 1)) / std::sqrt(static_cast<double>(good));
    }
    return estimate;
}

} // namespace

MomentEstimate estimate_moment(const RunConfig& config, int n, double q, int threads,
                               std::size_t point_index)
{
    config.validate();
    const SolverConfig& s = config.solver_required("estimate_moment");
    if (n < 0 || n > s.n_max)
        throw ValidationError("estimate_moment: n must lie in [0, N_max]");
    if (q < 1.0 || q > 2.0)
        throw ValidationError("estimate_moment: q must lie in [1, 2]");
    if (point_index >= s.points.size())
        throw ValidationError("estimate_moment: point_index out of range");

    const int R = config.mc.replicates;
    std::vector<double> values(R, 0.0);
    std::vector<char> ok(R, 0);
    const KernelSpec spec = config.kernel_spec();
    const Grids grids = config.grids();
    const DriftChannel drift = config.drift_channel();
    const ScalarField u0 = s.u0.make(config.domain);
    const Point& x = s.points[point_index];

    for_each_replicate(R, threads, [&](int r) {
        bool good = false;
        const NoiseField field = replicate_field(config, r, {x}, good);
        if (!good)
            return;
        const double term =
            s.mode == ProductMode::Star
                ? chaos_term_star(field, u0, n, s.t, x, spec, grids)
                : chaos_term_diamond(field, u0, n, s.t, x, spec, grids, drift);
        values[r] = std::pow(std::abs(term), q);
        ok[r] = 1;
    });
    return reduce_moment(values, ok, n, q);
}

ClusterEstimate cluster_probability(const RunConfig& config, double delta, IntRange n_range,
                                    IntRange m_range, IntRange k_range, int threads)
{
    config.noise.validate();
    config.domain.validate();
    if (!(delta > 0.0) || delta > 1.0)
        throw ValidationError("cluster_probability: delta must lie in (0, 1]");

    const int R = config.mc.replicates;
    std::vector<char> hit(R, 0);
    for_each_replicate(R, threads, [&](int r) {
        const std::uint64_t seed =
            stream_seed(config.mc.master_seed, static_cast<std::uint64_t>(r));
        const NoiseField field = sample_field(config.noise, config.domain, seed);
        hit[r] = detect_cluster_event(field, delta, n_range, m_range, k_range) ? 1 : 0;
    });

    ClusterEstimate estimate;
    estimate.replicates = R;
    int count = 0;
    for (int r = 0; r < R; ++r)
        count += hit[r];
    estimate.probability = static_cast<double>(count) / R;
    estimate.std_error = std::sqrt(estimate.probability * (1.0 - estimate.probability) / R);
    return estimate;
}

void run_experiment(const RunConfig& config, int threads)
{
    config.validate();
    const SolverConfig& s = config.solver_required("mc run");
    const int R = config.mc.replicates;
    const int d = config.domain.dim();

    std::vector<ReplicateSeries> results(R);
    for_each_replicate(R, threads, [&](int r) { results[r] = solve_replicate(config, r); });

    std::ostringstream fields;
    fields << "replicate,atom_index";
    for (int a = 1; a <= d; ++a)
        fields << ",x_" << a;
    fields << ",mass,type_index\n";
    std::size_t fields_rows = 0;
    for (int r = 0; r < R; ++r)
        for (std::size_t i = 0; i < results[r].field.atoms.size(); ++i) {
            const Atom& atom = results[r].field.atoms[i];
            fields << r << ',' << i;
            for (int a = 0; a < d; ++a)
                fields << ',' << fmt17(atom.location[a]);
            fields << ',' << fmt17(atom.mass) << ',' << atom.type_index << '\n';
            ++fields_rows;
        }

    const char* mode_name = s.mode == ProductMode::Star ? "star" : "diamond";
    std::ostringstream series;
    series << "replicate,mode,n,t";
    for (int a = 1; a <= d; ++a)
        series << ",x_" << a;
    series << ",term_value,partial_sum\n";
    std::size_t series_rows = 0;
    int failures = 0;
    for (int r = 0; r < R; ++r) {
        if (!results[r].ok) {
            ++failures;
            continue;
        }
        for (std::size_t j = 0; j < s.points.size(); ++j)
            for (int n = 0; n <= s.n_max; ++n) {
                series << r << ',' << mode_name << ',' << n << ',' << fmt17(s.t);
                for (int a = 0; a < d; ++a)
                    series << ',' << fmt17(s.points[j][a]);
                series << ',' << fmt17(results[r].terms[j][n]) << ','
                       << fmt17(results[r].partial[j][n]) << '\n';
                ++series_rows;
            }
    }

    std::ostringstream moments;
    moments << "n,q";
    for (int a = 1; a <= d; ++a)
        moments << ",x_" << a;
    moments << ",mean_abs_pow_q,std_error,replicates\n";
    std::size_t moments_rows = 0;
    std::vector<double> values(R);
    std::vector<char> ok(R);
    for (int r = 0; r < R; ++r)
        ok[r] = results[r].ok ? 1 : 0;
    for (std::size_t j = 0; j < s.points.size(); ++j)
        for (int n = 0; n <= s.n_max; ++n) {
            for (int r = 0; r < R; ++r)
                values[r] = results[r].ok
                                ? std::pow(std::abs(results[r].terms[j][n]), config.mc.q)
                                : 0.0;
            const MomentEstimate estimate = reduce_moment(values, ok, n, config.mc.q);
            moments << n << ',' << fmt17(config.mc.q);
            for (int a = 0; a < d; ++a)
                moments << ',' << fmt17(s.points[j][a]);
            moments << ',' << fmt17(estimate.mean) << ',' << fmt17(estimate.std_error) << ','
                    << estimate.replicates << '\n';
            ++moments_rows;
        }

    std::ostringstream verify;
    verify << "check_name,arguments,lhs,rhs,pass\n";
    std::size_t verify_rows = 0;
    for (const CheckRow& row : run_checks()) {
        verify << row.check_name << ',' << row.arguments << ',' << fmt17(row.lhs) << ','
               << fmt17(row.rhs) << ',' << (row.pass ? "true" : "false") << '\n';
        ++verify_rows;
    }

    nlohmann::ordered_json manifest;
    manifest["spec_version"] = kSpecVersion;
    manifest["seed_mixer"] = kSeedMixerDescription;
    manifest["master_seed"] = config.mc.master_seed;
    manifest["config"] = nlohmann::ordered_json::parse(config_to_json(config));
    manifest["row_counts"] = {{"fields.csv", fields_rows},
                              {"series.csv", series_rows},
                              {"moments.csv", moments_rows},
                              {"verify.csv", verify_rows}};
    manifest["failures"] = {{"replicates", failures}};

    const fs::path dir(config.output_directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("mc: cannot create output directory \"" + dir.string() +
                                 "\": " + ec.message());

    std::vector<fs::path> written;
    auto emit = [&](const char* name, const std::string& body) {
        const fs::path path = dir / name;
        std::ofstream out(path, std::ios::binary);
        if (out)
            out << body;
        if (!out) {
            for (const auto& prior : written)
                fs::remove(prior, ec);
            fs::remove(path, ec);
            throw std::runtime_error("mc: failed writing \"" + path.string() + "\"");
        }
        written.push_back(path);
    };
    emit("fields.csv", fields.str());
    emit("series.csv", series.str());
    emit("moments.csv", moments.str());
    emit("verify.csv", verify.str());
    emit("manifest.json", manifest.dump(2) + "\n");
}

} // namespace stableheat
