// randlat: random lattice experiments from the command line.
//
// Exit codes: 0 all checks satisfied, 1 a check failed, 2 usage or config error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "randlat/errors.hpp"
#include "randlat/experiment.hpp"

namespace {

using namespace randlat;
using nlohmann::json;

constexpr int kExitUsage = 2;

struct Flags {
    std::optional<int> d;
    std::optional<std::string> setting;
    std::optional<std::string> sampler;
    std::optional<std::int64_t> hecke_prime;
    std::optional<std::int64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> plot;
    std::optional<std::string> config;
    std::optional<unsigned> workers;
    bool skip_rejection = false;

    std::optional<std::string> family;
    std::optional<std::string> volumes;
    std::optional<std::string> shape_params;
    std::optional<std::string> radial;
    std::optional<std::int64_t> count;
    std::optional<std::int64_t> torsion;
    bool affine = false;
    std::optional<std::string> basis;
    std::optional<std::string> offset;
    std::optional<std::string> region;
    bool list_points = false;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--d", f.d, "Dimension");
    app->add_option("--setting", f.setting, "affine or regular");
    app->add_option("--sampler", f.sampler, "exact2, siegel or hecke");
    app->add_option("--hecke-prime", f.hecke_prime, "Prime index for the hecke sampler");
    app->add_option("--trials", f.trials, "Monte Carlo trials per check");
    app->add_option("--seed", f.seed, "Master seed");
    app->add_option("--out", f.out, "CSV output path (default stdout)");
    app->add_option("--config", f.config, "JSON config; flags override it");
    app->add_option("--workers", f.workers, "Worker threads (0 = all cores)");
}

json parse_json_flag(const std::string& name, const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("--" + name + " is not valid JSON: " + e.what());
    }
}

ExperimentConfig load(const Flags& f) {
    json j = json::object();
    if (f.config) {
        std::ifstream in(*f.config);
        if (!in) throw ConfigError("cannot open config file '" + *f.config + "'");
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
        }
    }
    if (f.d) j["d"] = *f.d;
    if (f.setting) j["setting"] = *f.setting;
    if (f.sampler) j["sampler"] = *f.sampler;
    if (f.hecke_prime) j["hecke_prime"] = *f.hecke_prime;
    if (f.trials) j["trials"] = *f.trials;
    if (f.seed) j["seed"] = *f.seed;
    if (f.out) j["out"] = *f.out;
    if (f.plot) j["plot"] = *f.plot;
    if (f.workers) j["workers"] = *f.workers;
    if (f.skip_rejection) j["skip_rejection"] = true;
    if (f.family) j["family"] = *f.family;
    if (f.volumes) j["volumes"] = parse_json_flag("volumes", *f.volumes);
    if (f.shape_params) j["shape_params"] = parse_json_flag("shape-params", *f.shape_params);
    if (f.radial) j["radial"] = parse_json_flag("radial", *f.radial);
    if (f.count) j["count"] = *f.count;
    if (f.torsion) j["torsion"] = *f.torsion;
    if (f.affine) j["setting"] = "affine";
    if (f.basis) j["basis"] = *f.basis;
    if (f.offset) j["offset"] = parse_json_flag("offset", *f.offset);
    if (f.region) j["region"] = parse_json_flag("region", *f.region);
    if (f.list_points) j["list_points"] = true;
    return config_from_json(j);
}

/// Writes to the --out path if given, else stdout.
template <class Emit>
void emit(const ExperimentConfig& c, Emit&& body) {
    if (c.out.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream os(c.out);
    if (!os) throw ConfigError("cannot write '" + c.out + "'");
    body(os);
}

int report(const ExperimentConfig& c, const std::vector<CsvRow>& rows) {
    emit(c, [&](std::ostream& os) { write_csv(os, rows); });
    return exit_code(rows);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random lattices: Siegel/Rogers identities, hole bounds and flat-torus spectra"};
    app.require_subcommand(1);
    Flags f;

    auto* verify = app.add_subcommand("verify", "Run the verification suite");
    add_common(verify, f);
    verify->add_flag("--skip-rejection", f.skip_rejection, "Test hook: drop the sampler's rejection step");

    auto* sweep = app.add_subcommand("sweep", "Hole probabilities over a volume grid");
    add_common(sweep, f);
    sweep->add_option("--family", f.family, "ball, thinbox or annulus");
    sweep->add_option("--volumes", f.volumes, "JSON array of ascending volumes");
    sweep->add_option("--shape-params", f.shape_params, "JSON array: thinbox aspect or annulus inner/outer ratio");
    sweep->add_option("--plot", f.plot, "SVG output path");

    auto* spectra = app.add_subcommand("spectra", "Dual-length hole bound on a radial set");
    add_common(spectra, f);
    spectra->add_option("--radial", f.radial, "JSON intervals, e.g. '[[0.1,3]]'");

    auto* sample = app.add_subcommand("sample", "Dump sampled lattices as JSON lines");
    add_common(sample, f);
    sample->add_option("--count", f.count, "Number of lattices");
    sample->add_flag("--affine", f.affine, "Include uniform offsets");
    sample->add_option("--torsion", f.torsion, "Primitive q-torsion offsets (implies affine)");

    auto* count = app.add_subcommand("count", "Count lattice points of one basis in a region");
    add_common(count, f);
    count->add_option("--basis", f.basis, "File with the basis: JSON rows or whitespace text")->required();
    count->add_option("--offset", f.offset, "JSON offset vector (affine lattice)");
    count->add_option("--region", f.region, "Region JSON")->required();
    count->add_flag("--list-points", f.list_points, "Also print the points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (verify->parsed()) {
            ExperimentConfig c = load(f);
            return report(c, run_verify(c));
        }
        if (sweep->parsed()) {
            ExperimentConfig c = load(f);
            const SweepResult r = run_sweep(c);
            if (!c.plot.empty()) {
                std::ofstream svg(c.plot);
                if (!svg) throw ConfigError("cannot write '" + c.plot + "'");
                svg << sweep_svg(r.sweep, c.setting, c.d);
            }
            return report(c, r.rows);
        }
        if (spectra->parsed()) {
            ExperimentConfig c = load(f);
            c.setting = Setting::regular;
            return report(c, {run_spectra(c)});
        }
        if (sample->parsed()) {
            if (f.torsion) f.affine = true;
            ExperimentConfig c = load(f);
            if (!f.affine && !f.setting && !f.config) c.setting = Setting::regular;
            const auto lines = sample_dump(c);
            emit(c, [&](std::ostream& os) {
                for (const json& j : lines) os << j.dump() << '\n';
            });
            return 0;
        }
        if (count->parsed()) {
            ExperimentConfig c = load(f);
            const json j = run_count(c);
            emit(c, [&](std::ostream& os) { os << j.dump() << '\n'; });
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitUsage;
}
