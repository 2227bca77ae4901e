#include "randlat/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "randlat/counting.hpp"
#include "randlat/errors.hpp"
#include "randlat/spectra.hpp"
#include "randlat/statistics.hpp"

namespace randlat {

using nlohmann::json;

namespace {

template <class T>
T get_as(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known = {
        "d",       "setting", "sampler",   "hecke_prime", "trials", "seed",        "out",
        "plot",    "family",  "volumes",   "shape_params", "radial", "count",      "torsion",
        "region",  "basis",   "offset",    "list_points", "skip_rejection", "workers",
        "check_budget_seconds"};
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");

    ExperimentConfig c;
    if (j.contains("d")) c.d = get_as<int>(j, "d");
    if (j.contains("setting")) c.setting = parse_setting(get_as<std::string>(j, "setting"));
    if (j.contains("sampler")) c.method = parse_sampler(get_as<std::string>(j, "sampler"));
    if (j.contains("hecke_prime")) c.hecke_prime = get_as<std::int64_t>(j, "hecke_prime");
    if (j.contains("skip_rejection")) c.skip_rejection = get_as<bool>(j, "skip_rejection");
    if (j.contains("trials")) c.trials = get_as<std::int64_t>(j, "trials");
    if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
    if (j.contains("out")) c.out = get_as<std::string>(j, "out");
    if (j.contains("plot")) c.plot = get_as<std::string>(j, "plot");
    if (j.contains("family")) c.family = get_as<std::string>(j, "family");
    if (j.contains("volumes")) c.volumes = get_as<std::vector<double>>(j, "volumes");
    if (j.contains("shape_params")) c.shape_params = get_as<std::vector<double>>(j, "shape_params");
    if (j.contains("radial")) c.radial = j.at("radial");
    if (j.contains("count")) c.count = get_as<std::int64_t>(j, "count");
    if (j.contains("torsion")) c.torsion = get_as<std::int64_t>(j, "torsion");
    if (j.contains("region")) c.region = j.at("region");
    if (j.contains("basis")) c.basis_path = get_as<std::string>(j, "basis");
    if (j.contains("offset")) c.offset = get_as<std::vector<double>>(j, "offset");
    if (j.contains("list_points")) c.list_points = get_as<bool>(j, "list_points");
    if (j.contains("workers")) c.workers = get_as<unsigned>(j, "workers");
    if (j.contains("check_budget_seconds")) c.check_budget_seconds = get_as<double>(j, "check_budget_seconds");
    return c;
}

SamplerSpec sampler_spec(const ExperimentConfig& config, int d) {
    if (d == 0) d = config.d;
    if (d < 2) throw ConfigError("dimension must be >= 2");
    SamplerSpec s = default_sampler(d);
    if (d == config.d && config.method) s.method = *config.method;
    s.hecke_prime = config.hecke_prime;
    s.skip_rejection = config.skip_rejection;
    validate(s);
    return s;
}

// ---------------------------------------------------------------- CSV

std::string csv_header() {
    return "experiment_id,d,setting,sampler,region_json,volume,n_trials,statistic,estimate,std_error,ci_lo,ci_hi,"
           "theory_value_or_bound,satisfied,seed,wall_time_ms";
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

std::string to_csv_line(const CsvRow& r) {
    std::ostringstream os;
    os << field(r.experiment_id) << ',' << r.d << ',' << field(r.setting) << ',' << field(r.sampler) << ','
       << field(r.region_json) << ',' << fmt(r.volume) << ',' << r.n_trials << ',' << field(r.statistic) << ','
       << fmt(r.estimate) << ',' << fmt(r.std_error) << ',' << fmt(r.ci_lo) << ',' << fmt(r.ci_hi) << ','
       << fmt(r.theory_value_or_bound) << ',' << (r.satisfied ? "true" : "false") << ',' << r.seed << ','
       << r.wall_time_ms;
    return os.str();
}

void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
    os << kCsvVersionLine << '\n' << csv_header() << '\n';
    for (const CsvRow& r : rows) os << to_csv_line(r) << '\n';
}

int exit_code(const std::vector<CsvRow>& rows) {
    return std::all_of(rows.begin(), rows.end(), [](const CsvRow& r) { return r.satisfied; }) ? 0 : 1;
}

// ---------------------------------------------------------------- verify

namespace {

using Clock = std::chrono::steady_clock;

std::string sampler_label(const SamplerSpec& s) {
    std::string name = to_string(s.method);
    if (s.method == SamplerMethod::hecke) name += "(p=" + std::to_string(s.hecke_prime) + ")";
    if (s.skip_rejection && s.method != SamplerMethod::hecke) name += "(no-rejection)";
    return name;
}

CsvRow base_row(const std::string& id, const SamplerSpec& spec, Setting setting, std::uint64_t seed) {
    CsvRow r;
    r.experiment_id = id;
    r.d = spec.d;
    r.setting = to_string(setting);
    r.sampler = sampler_label(spec);
    r.seed = seed;
    return r;
}

void fill(CsvRow& row, const EstimateResult& e) {
    row.n_trials = e.n_trials;
    row.estimate = e.estimate;
    row.std_error = e.std_error;
    row.ci_lo = e.ci_lo;
    row.ci_hi = e.ci_hi;
}

void describe(CsvRow& row, const Region& r) {
    row.region_json = region_to_json(r).dump();
    row.volume = r.volume();
}

CsvRow identity_row(const std::string& id, const SamplerSpec& spec, Setting setting, std::uint64_t seed,
                    const std::string& statistic, const EstimateResult& e, double theory) {
    CsvRow row = base_row(id, spec, setting, seed);
    row.statistic = statistic;
    fill(row, e);
    row.theory_value_or_bound = theory;
    row.satisfied = std::abs(e.estimate - theory) <= 4.0 * e.std_error;
    return row;
}

CsvRow bound_row(const std::string& id, const SamplerSpec& spec, Setting setting, std::uint64_t seed,
                 const std::string& statistic, const BoundReport& b) {
    CsvRow row = base_row(id, spec, setting, seed);
    row.statistic = statistic;
    fill(row, b.empirical);
    row.theory_value_or_bound = b.bound;
    row.satisfied = b.satisfied;
    return row;
}

EstimateResult rescaled(EstimateResult e, double factor) {
    e.estimate *= factor;
    e.std_error *= factor;
    e.ci_lo *= factor;
    e.ci_hi *= factor;
    return e;
}

/// Moves the region so its bounding ball touches the origin from the +e_1 side.
Region tangent_to_origin(const Region& r) {
    const BoundingBall& b = r.bounding_ball();
    Vector shift(r.dim(), 0.0);
    for (std::size_t i = 0; i < shift.size(); ++i) shift[i] = -b.center[i];
    shift[0] += b.radius;
    return translated(r, shift);
}

Region placed(const Region& r, Setting setting) { return setting == Setting::regular ? tangent_to_origin(r) : r; }

/// Runs one check group under the wall-clock budget and stamps timing on
/// its rows. A group that overruns becomes one unsatisfied "skipped" row.
struct CheckRunner {
    const ExperimentConfig& config;
    std::vector<CsvRow>& rows;

    RunOptions options() const {
        RunOptions o;
        o.workers = config.workers;
        o.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(config.check_budget_seconds));
        return o;
    }

    void operator()(const std::string& group, const std::function<std::vector<CsvRow>(const RunOptions&)>& check) {
        const auto start = Clock::now();
        std::vector<CsvRow> out;
        try {
            out = check(options());
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            CsvRow r;
            r.experiment_id = group;
            r.d = config.d;
            r.statistic = dynamic_cast<const BudgetExceeded*>(&e) ? "skipped_budget" : "error";
            r.region_json = e.what();
            r.estimate = r.std_error = r.ci_lo = r.ci_hi = std::numeric_limits<double>::quiet_NaN();
            r.seed = config.seed;
            r.satisfied = false;
            out = {r};
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
        for (CsvRow& r : out) {
            r.wall_time_ms = ms;
            rows.push_back(std::move(r));
        }
    }
};

std::string vol_tag(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::vector<Region> identity_regions(int d) {
    std::vector<Region> regions;
    for (double v : {1.0, 5.0, 20.0}) {
        regions.push_back(ball_of_volume(d, v));
        regions.push_back(cube_of_volume(d, v));
        regions.push_back(annulus_of_volume(d, v, 0.5));
    }
    return regions;
}

std::string shape_name(const Region& r) {
    if (std::holds_alternative<Ball>(r.node())) return "ball";
    if (std::holds_alternative<Box>(r.node())) return "box";
    if (std::holds_alternative<Annulus>(r.node())) return "annulus";
    return "region";
}

struct PairCase {
    std::string name;
    Region a;
    Region b;
};

std::vector<PairCase> pair_cases(int d) {
    const auto n = static_cast<std::size_t>(d);
    const double s3 = std::pow(3.0, 1.0 / d);
    Vector left(n, 0.0), right(n, 0.0);
    left[0] = -(0.5 * s3 + 0.05);
    right[0] = 0.5 * s3 + 0.05;

    const double s4 = std::pow(4.0, 1.0 / d);
    Vector lo(n, -0.5 * s4), hi(n, 0.5 * s4);
    Vector half_hi = hi;
    half_hi[0] = 0.0;

    const Region ball2 = Region::ball(Vector(n, 0.0), 2.0);
    return {{"disjoint", cube_of_volume(d, 3.0, left), cube_of_volume(d, 3.0, right)},
            {"nested", Region::box(lo, half_hi), Region::box(lo, hi)},
            {"equal", ball2, ball2}};
}

std::vector<CsvRow> moment_checks(const ExperimentConfig& config, const SamplerSpec& spec, const RunOptions& o) {
    const std::uint64_t seed = config.seed;
    const std::int64_t n = config.trials;
    const auto regions = identity_regions(spec.d);
    const auto pairs = pair_cases(spec.d);

    std::vector<Region> all = regions;
    for (const PairCase& p : pairs) {
        all.push_back(p.a);
        all.push_back(p.b);
    }
    const auto counts = collect_counts(spec, Setting::affine, all, n, seed, o);

    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const std::string tag = shape_name(regions[i]) + ".v" + vol_tag(regions[i].volume());
        CsvRow m = identity_row("C1.mean." + tag, spec, Setting::affine, seed, "mean", summarize_mean(counts[i], seed),
                                regions[i].volume());
        describe(m, regions[i]);
        rows.push_back(m);
    }
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const std::string tag = shape_name(regions[i]) + ".v" + vol_tag(regions[i].volume());
        const EstimateResult v = summarize_variance(counts[i], seed, 1000);
        CsvRow row = base_row("C2.variance." + tag, spec, Setting::affine, seed);
        row.statistic = "variance";
        fill(row, v);
        describe(row, regions[i]);
        row.theory_value_or_bound = regions[i].volume();
        row.satisfied = v.ci_lo <= row.theory_value_or_bound && row.theory_value_or_bound <= v.ci_hi;
        rows.push_back(row);
    }
    {
        // A = B = Ball(0, 2) is the last pair case.
        const PairCase& eq = pairs.back();
        const auto& c = counts[regions.size() + 2 * (pairs.size() - 1)];
        const double v = eq.a.volume();
        CsvRow s = identity_row("C3.second_moment.ball.r2", spec, Setting::affine, seed, "second_moment",
                                summarize_product(c, c, seed), v * v + v);
        describe(s, eq.a);
        rows.push_back(s);
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const PairCase& p = pairs[k];
        const auto& ca = counts[regions.size() + 2 * k];
        const auto& cb = counts[regions.size() + 2 * k + 1];
        const double va = p.a.volume(), vb = p.b.volume();
        const IntersectionVolume inter = intersection_volume(p.a, p.b);
        const EstimateResult e = summarize_product(ca, cb, seed);
        CsvRow row = identity_row("C4.pair." + p.name, spec, Setting::affine, seed, "pair_moment", e,
                                  va * vb + inter.value);
        row.region_json = json::array({region_to_json(p.a), region_to_json(p.b)}).dump();
        row.volume = inter.value;
        rows.push_back(row);
    }
    return rows;
}

std::vector<CsvRow> affine_hole_checks(const std::string& prefix, const SamplerSpec& spec, std::int64_t n,
                                       std::uint64_t seed, const RunOptions& o) {
    std::vector<CsvRow> rows;
    for (double v : {1.0, 9.0, 20.0, 50.0}) {
        const Region r = ball_of_volume(spec.d, v);
        const EstimateResult p = estimate_hole_prob(spec, Setting::affine, r, n, seed, o);
        CsvRow hole = bound_row(prefix + ".hole.v" + vol_tag(v), spec, Setting::affine, seed, "hole_prob",
                                make_bound_report(p, theoretical_bound(v, spec.d, Setting::affine)));
        describe(hole, r);
        rows.push_back(hole);
        CsvRow norm = bound_row(prefix + ".normalized.v" + vol_tag(v), spec, Setting::affine, seed,
                                "normalized_hole", make_bound_report(rescaled(p, 1.0 + v), 1.0));
        describe(norm, r);
        rows.push_back(norm);
    }
    return rows;
}

std::vector<CsvRow> mean_checks_only(const std::string& prefix, const SamplerSpec& spec, std::int64_t n,
                                     std::uint64_t seed, const RunOptions& o) {
    const auto regions = identity_regions(spec.d);
    const auto counts = collect_counts(spec, Setting::affine, regions, n, seed, o);
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const std::string tag = shape_name(regions[i]) + ".v" + vol_tag(regions[i].volume());
        CsvRow m = identity_row(prefix + ".mean." + tag, spec, Setting::affine, seed, "mean",
                                summarize_mean(counts[i], seed), regions[i].volume());
        describe(m, regions[i]);
        rows.push_back(m);
    }
    return rows;
}

std::vector<CsvRow> regular_hole_checks(const SamplerSpec& spec, std::int64_t n, std::uint64_t seed,
                                        const RunOptions& o) {
    std::vector<CsvRow> rows;
    for (double v : {50.0, 100.0, 200.0}) {
        const Region r = tangent_to_origin(ball_of_volume(spec.d, v));
        const EstimateResult p = estimate_hole_prob(spec, Setting::regular, r, n, seed, o);
        CsvRow row = bound_row("C7.regular_hole.v" + vol_tag(v), spec, Setting::regular, seed, "hole_prob",
                               make_bound_report(p, theoretical_bound(v, spec.d, Setting::regular)));
        describe(row, r);
        rows.push_back(row);
    }
    return rows;
}

CsvRow spectrum_row(const std::string& id, const SamplerSpec& spec, const RadialSet& s, std::int64_t n,
                    std::uint64_t seed, const RunOptions& o) {
    const BoundReport b = verify_spectrum_bound(spec, s, n, seed, o);
    CsvRow row = bound_row(id, spec, Setting::regular, seed, "spectrum_hole_prob", b);
    json iv = json::array();
    for (const auto& [a, c] : s.intervals()) iv.push_back({a, c});
    row.region_json = json{{"type", "radial"}, {"intervals", iv}}.dump();
    row.volume = radial_volume(s, spec.d);
    return row;
}

constexpr std::int64_t kCrossValidationDraws = 10000;
constexpr std::uint64_t kCrossStream = kAuxiliaryStreamBase + (1ULL << 40);

CsvRow ks_row(const std::string& id, const std::string& statistic, const std::string& samplers, double ks,
              double threshold, std::uint64_t seed) {
    CsvRow row;
    row.experiment_id = id;
    row.d = 2;
    row.setting = "regular";
    row.sampler = samplers;
    row.n_trials = kCrossValidationDraws;
    row.statistic = statistic;
    row.estimate = row.ci_lo = row.ci_hi = ks;
    row.theory_value_or_bound = threshold;
    row.satisfied = ks < threshold;
    row.seed = seed;
    return row;
}

std::vector<CsvRow> cross_validation_checks(const ExperimentConfig& config, const RunOptions& o) {
    const std::uint64_t seed = config.seed;
    const std::int64_t n = kCrossValidationDraws;
    std::vector<double> y_exact(n), y_siegel(n), sv_exact(n), sv_hecke(n);
    SamplerSpec hecke;
    hecke.method = SamplerMethod::hecke;
    hecke.hecke_prime = kDefaultHeckePrime;
    validate(hecke);

    run_trials(n, o, [&](std::int64_t t) {
        const auto u = static_cast<std::uint64_t>(t);
        Rng a({seed, kCrossStream + u});
        y_exact[t] = sample_modular_point(a, config.skip_rejection).y;
        Rng b({seed, kCrossStream + (1ULL << 32) + u});
        const SiegelDraw f = sample_siegel_form(2, b, config.skip_rejection);
        y_siegel[t] = f.upper(1, 1) / f.upper(0, 0);
        Rng c({seed, kCrossStream + (2ULL << 32) + u});
        sv_exact[t] = norm(shortest_vector(sample_x2_exact(c, config.skip_rejection)));
        Rng e({seed, kCrossStream + (3ULL << 32) + u});
        sv_hecke[t] = norm(shortest_vector(sample_xd_hecke(2, hecke.hecke_prime, e)));
    });
    return {ks_row("C9.ks.y_marginal", "ks_exact2_vs_siegel_y", "exact2|siegel",
                   stats::ks_statistic(y_exact, y_siegel), 0.03, seed),
            ks_row("C9.ks.shortest_vector", "ks_exact2_vs_hecke_shortest", "exact2|hecke(p=10007)",
                   stats::ks_statistic(sv_exact, sv_hecke), 0.05, seed)};
}

constexpr int kOracleInstances = 100;
constexpr std::uint64_t kOracleStream = kAuxiliaryStreamBase + (1ULL << 41);

Region random_region(int d, Rng& rng) {
    const auto n = static_cast<std::size_t>(d);
    Vector c(n);
    for (double& x : c) x = rng.uniform(-2.0, 2.0);
    switch (rng.uniform_int(0, 2)) {
        case 0: return Region::ball(c, rng.uniform(0.2, 2.5));
        case 1: {
            Vector hi(n);
            for (std::size_t i = 0; i < n; ++i) hi[i] = c[i] + rng.uniform(0.2, 3.0);
            return Region::box(c, hi);
        }
        default: {
            const double r_out = rng.uniform(0.5, 2.5);
            return Region::annulus(c, rng.uniform(0.1, 0.9) * r_out, r_out);
        }
    }
}

std::vector<CsvRow> counting_oracle_checks(const ExperimentConfig& config) {
    std::vector<CsvRow> rows;
    for (int d : {2, 3}) {
        const SamplerSpec spec = default_sampler(d);
        std::int64_t mismatches = 0;
        for (int i = 0; i < kOracleInstances; ++i) {
            Rng rng({config.seed, kOracleStream + static_cast<std::uint64_t>(d) * 1000 + static_cast<std::uint64_t>(i)});
            const Region r = random_region(d, rng);
            // The scan runs over coefficients of the reduced basis so skewed
            // cusp draws stay within the brute-force budget.
            if (i % 2 == 0) {
                const UnimodularLattice l = sample_lattice(spec, rng);
                const UnimodularLattice scan = make_lattice(l.reduced_basis());
                const auto bound = required_coeff_bound(scan, r);
                if (count_region(l, r).count != brute_force_count(scan, r, bound).count) ++mismatches;
            } else {
                const AffineUnimodularLattice a = sample_affine(spec, rng);
                const AffineUnimodularLattice scan = make_affine(make_lattice(a.lattice().reduced_basis()), a.offset());
                const auto bound = required_coeff_bound(scan.lattice(), r, scan.offset());
                if (count_region(a, r).count != brute_force_count(scan, r, bound).count) ++mismatches;
            }
        }
        CsvRow row = base_row("C10.count_oracle.d" + std::to_string(d), spec, Setting::affine, config.seed);
        row.setting = "mixed";
        row.n_trials = kOracleInstances;
        row.statistic = "count_mismatches";
        row.estimate = row.ci_lo = row.ci_hi = static_cast<double>(mismatches);
        row.theory_value_or_bound = 0.0;
        row.satisfied = mismatches == 0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::vector<CsvRow> run_verify(const ExperimentConfig& config) {
    if (config.trials < 10000) throw ConfigError("verify needs --trials >= 10000");
    const SamplerSpec primary = sampler_spec(config);
    const SamplerSpec d2 = sampler_spec(config, 2);
    const SamplerSpec d3 = sampler_spec(config, 3);
    const std::int64_t n = config.trials;
    const std::int64_t n_small = std::max<std::int64_t>(n / 10, 1000);
    const std::uint64_t seed = config.seed;

    std::vector<CsvRow> rows;
    CheckRunner run{config, rows};
    run("C1-C4", [&](const RunOptions& o) { return moment_checks(config, primary, o); });
    run("C5", [&](const RunOptions& o) { return affine_hole_checks("C5", primary, n, seed, o); });
    run("C6.mean", [&](const RunOptions& o) { return mean_checks_only("C6", d3, n_small, seed, o); });
    run("C6.hole", [&](const RunOptions& o) { return affine_hole_checks("C6", d3, n_small, seed, o); });
    run("C7", [&](const RunOptions& o) { return regular_hole_checks(primary, n, seed, o); });
    run("C8.d2", [&](const RunOptions& o) {
        return std::vector<CsvRow>{spectrum_row("C8.spectrum.d2", d2, RadialSet({{0.1, 3.0}}), n, seed, o)};
    });
    run("C8.d3", [&](const RunOptions& o) {
        return std::vector<CsvRow>{spectrum_row("C8.spectrum.d3", d3, RadialSet({{0.2, 2.5}}), n_small, seed, o)};
    });
    run("C9", [&](const RunOptions& o) { return cross_validation_checks(config, o); });
    run("C10", [&](const RunOptions&) { return counting_oracle_checks(config); });
    return rows;
}

// ---------------------------------------------------------------- sweep

namespace {

Region family_region(const std::string& family, int d, double volume, double param) {
    if (family == "ball") return ball_of_volume(d, volume);
    if (family == "thinbox") return thin_box(d, volume, param);
    if (family == "annulus") return annulus_of_volume(d, volume, param);
    throw ConfigError("unknown sweep family '" + family + "' (expected ball, thinbox or annulus)");
}

std::vector<double> default_shape_params(const std::string& family) {
    if (family == "thinbox") return {10.0};
    if (family == "annulus") return {0.5};
    return {0.0};
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
    const SamplerSpec spec = sampler_spec(config);
    if (config.volumes.empty()) throw ConfigError("sweep needs a non-empty volume grid");
    for (std::size_t i = 0; i < config.volumes.size(); ++i) {
        if (!(config.volumes[i] > 0.0)) throw ConfigError("sweep volumes must be positive");
        if (i > 0 && !(config.volumes[i] > config.volumes[i - 1]))
            throw ConfigError("sweep volume grid must be strictly ascending");
    }
    const std::vector<double> params =
        config.shape_params.empty() ? default_shape_params(config.family) : config.shape_params;
    // Build every region first so shape errors surface as config errors.
    std::vector<std::pair<double, std::vector<Region>>> grid;
    for (double param : params) {
        std::vector<Region> regions;
        for (double v : config.volumes) {
            try {
                regions.push_back(placed(family_region(config.family, spec.d, v, param), config.setting));
            } catch (const RegionError& e) {
                throw ConfigError(e.what());
            }
        }
        grid.emplace_back(param, std::move(regions));
    }

    SweepResult out;
    std::vector<CsvRow>& rows = out.rows;
    CheckRunner run{config, rows};
    for (const auto& [param, regions] : grid) {
        for (const Region& r : regions) {
            const double v = r.volume();
            const std::string id = "sweep." + config.family + ".s" + vol_tag(param) + ".v" + vol_tag(v);
            run(id, [&](const RunOptions& o) {
                const EstimateResult p = estimate_hole_prob(spec, config.setting, r, config.trials, config.seed, o);
                const double factor = config.setting == Setting::affine ? 1.0 + v : v;
                SweepRow s{config.family, param, v, p.estimate, p.std_error, factor * p.estimate};
                out.sweep.push_back(s);

                CsvRow hole = bound_row(id, spec, config.setting, config.seed, "hole_prob",
                                        make_bound_report(p, theoretical_bound(v, spec.d, config.setting)));
                describe(hole, r);
                const double ref = config.setting == Setting::affine ? 1.0 : rogers_constant(spec.d);
                CsvRow norm = bound_row(id, spec, config.setting, config.seed, "normalized_hole",
                                        make_bound_report(rescaled(p, factor), ref));
                describe(norm, r);
                return std::vector<CsvRow>{hole, norm};
            });
        }
    }
    return out;
}

std::string sweep_svg(const std::vector<SweepRow>& rows, Setting setting, int d) {
    constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;
    const double ref = setting == Setting::affine ? 1.0 : rogers_constant(d);
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_hi = ref;
    for (const SweepRow& r : rows) {
        x_lo = std::min(x_lo, r.volume);
        x_hi = std::max(x_hi, r.volume);
        y_hi = std::max(y_hi, r.normalized);
    }
    if (rows.empty()) x_lo = 0.0, x_hi = 1.0;
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
    y_hi *= 1.1;
    auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kW - kLeft - kRight); };
    auto py = [&](double y) { return kH - kBottom - y / y_hi * (kH - kTop - kBottom); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kW - kRight << "\" y2=\"" << py(0)
       << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft << "\" y2=\"" << kTop
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x_lo + (x_hi - x_lo) * i / 4.0, yv = y_hi * i / 4.0;
        os << "<text x=\"" << px(xv) << "\" y=\"" << kH - kBottom + 18 << "\" font-size=\"11\" text-anchor=\"middle\">"
           << fmt(std::round(xv * 100) / 100) << "</text>\n"
           << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
           << fmt(std::round(yv * 1000) / 1000) << "</text>\n";
    }
    os << "<text x=\"" << (kW + kLeft) / 2 << "\" y=\"" << kH - 10 << "\" font-size=\"12\" text-anchor=\"middle\">"
       << "volume |A|</text>\n"
       << "<text x=\"16\" y=\"" << (kH - kBottom + kTop) / 2 << "\" font-size=\"12\" text-anchor=\"middle\" "
       << "transform=\"rotate(-90 16 " << (kH - kBottom + kTop) / 2 << ")\">"
       << (setting == Setting::affine ? "(1+|A|) p_hat" : "|A| p_hat") << "</text>\n"
       << "<line x1=\"" << kLeft << "\" y1=\"" << py(ref) << "\" x2=\"" << kW - kRight << "\" y2=\"" << py(ref)
       << "\" stroke=\"red\" stroke-dasharray=\"6 4\"/>\n";

    static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b"};
    std::vector<std::pair<std::string, double>> series;
    for (const SweepRow& r : rows) {
        const auto key = std::make_pair(r.family, r.shape_param);
        if (std::find(series.begin(), series.end(), key) == series.end()) series.push_back(key);
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        os << "<polyline fill=\"none\" stroke=\"" << kColors[k % 5] << "\" stroke-width=\"2\" points=\"";
        for (const SweepRow& r : rows)
            if (r.family == series[k].first && r.shape_param == series[k].second)
                os << px(r.volume) << ',' << py(r.normalized) << ' ';
        os << "\"/>\n<text x=\"" << kW - kRight - 4 << "\" y=\"" << kTop + 14 * (k + 1)
           << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << kColors[k % 5] << "\">" << series[k].first
           << " " << fmt(series[k].second) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

// ---------------------------------------------------------------- spectra, sample, count

CsvRow run_spectra(const ExperimentConfig& config) {
    const SamplerSpec spec = sampler_spec(config);
    if (!config.radial) throw ConfigError("spectra needs a radial set (--radial)");
    RadialSet s;
    try {
        s = radial_from_json(*config.radial);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad radial set: ") + e.what());
    }
    if (config.trials < 1000) throw ConfigError("spectra needs --trials >= 1000");
    std::vector<CsvRow> rows;
    CheckRunner run{config, rows};
    run("spectra", [&](const RunOptions& o) {
        return std::vector<CsvRow>{spectrum_row("spectra", spec, s, config.trials, config.seed, o)};
    });
    return rows.front();
}

std::vector<json> sample_dump(const ExperimentConfig& config) {
    const SamplerSpec spec = sampler_spec(config);
    if (config.count < 1) throw ConfigError("sample needs --count >= 1");
    if (config.torsion == 1 || config.torsion < 0) throw ConfigError("torsion order must be >= 2");
    std::vector<json> out;
    for (std::int64_t i = 0; i < config.count; ++i) {
        Rng rng({config.seed, static_cast<std::uint64_t>(i)});
        json j;
        j["seed"] = config.seed;
        j["stream"] = i;
        j["sampler"] = sampler_label(spec);
        j["d"] = spec.d;
        auto record = [&](const UnimodularLattice& l) {
            j["basis"] = l.basis().to_rows();
            j["shortest_vector_norm"] = norm(shortest_vector(l));
        };
        if (config.setting == Setting::affine) {
            const AffineUnimodularLattice a =
                config.torsion >= 2 ? sample_torsion_affine(spec, config.torsion, rng) : sample_affine(spec, rng);
            record(a.lattice());
            j["offset"] = a.offset();
            if (config.torsion >= 2) j["torsion"] = config.torsion;
        } else {
            record(sample_lattice(spec, rng));
        }
        out.push_back(std::move(j));
    }
    return out;
}

Matrix read_basis(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open basis file '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::vector<double>> rows;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        try {
            rows = json::parse(text).get<std::vector<std::vector<double>>>();
        } catch (const json::exception& e) {
            throw ConfigError("basis file is not a JSON array of rows: " + std::string(e.what()));
        }
    } else {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            std::istringstream ls(line);
            std::vector<double> row;
            std::string tok;
            while (ls >> tok) {
                try {
                    std::size_t used = 0;
                    row.push_back(std::stod(tok, &used));
                    if (used != tok.size()) throw std::invalid_argument(tok);
                } catch (const std::exception&) {
                    throw ConfigError("basis file has a non-numeric entry '" + tok + "'");
                }
            }
            if (!row.empty()) rows.push_back(std::move(row));
        }
    }
    try {
        return Matrix::from_rows(rows);
    } catch (const DimensionMismatch& e) {
        throw ConfigError(std::string("basis file: ") + e.what());
    }
}

json run_count(const ExperimentConfig& config) {
    if (config.basis_path.empty()) throw ConfigError("count needs --basis");
    if (!config.region) throw ConfigError("count needs --region");
    const Matrix b = read_basis(config.basis_path);
    UnimodularLattice l = [&] {
        try {
            return make_lattice(b);
        } catch (const Error& e) {
            throw ConfigError(std::string("basis: ") + e.what());
        }
    }();
    Region r = [&] {
        try {
            return region_from_json(*config.region, static_cast<int>(l.dim()));
        } catch (const Error& e) {
            throw ConfigError(std::string("region: ") + e.what());
        }
    }();
    CountResult c;
    if (!config.offset.empty()) {
        if (config.offset.size() != l.dim()) throw ConfigError("offset dimension does not match the basis");
        CountOptions o;
        o.keep_points = config.list_points;
        c = count_region(make_affine(l, config.offset), r, o);
    } else {
        CountOptions o;
        o.keep_points = config.list_points;
        c = count_region(l, r, o);
    }
    json out{{"count", c.count}};
    if (config.list_points) {
        std::sort(c.points.begin(), c.points.end());
        out["points"] = c.points;
    }
    return out;
}

}  // namespace randlat
