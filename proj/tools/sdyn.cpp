// Command-line front end: deterministic experiment runner over the library.
// Exit codes: 0 ok, 2 input degeneracy, 3 budget exceeded, 4 numeric failure.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "sd/io.hpp"
#include "sd/parallel.hpp"

using namespace sd;
using nlohmann::json;

namespace {

struct RunConfig {
    std::uint64_t seed = 0;
    double tol = 1e-6;
    unsigned budget_m = 3;
    unsigned budget_n = 4;
    unsigned depth = 20;
    unsigned width = 4000;
    std::string emit = "json";
    std::string out;
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "RNG seed (default 0)");
    cmd->add_option("--tol", cfg.tol, "tolerance / target error")->check(CLI::PositiveNumber);
    cmd->add_option("--budget-m", cfg.budget_m, "preperiodicity tail budget");
    cmd->add_option("--budget-n", cfg.budget_n, "preperiodicity cycle budget");
    cmd->add_option("--depth", cfg.depth, "backward walk depth");
    cmd->add_option("--width", cfg.width, "number of backward walks");
    cmd->add_option("--emit", cfg.emit, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", cfg.out, "output path (default stdout)");
}

json config_echo(const RunConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["tol"] = cfg.tol;
    j["budget_m"] = cfg.budget_m;
    j["budget_n"] = cfg.budget_n;
    j["depth"] = cfg.depth;
    j["width"] = cfg.width;
    return j;
}

/// Inputs are hashed as git blobs so reruns are attributable to bytes.
json input_hashes(const std::vector<std::pair<std::string, std::string>>& specs) {
    json j;
    for (const auto& [key, spec] : specs) {
        std::string content;
        try {
            content = read_file(spec);
        } catch (const ParseError&) {
            content = spec; // alias: hash the name itself
        }
        j[key] = git_blob_hash(content);
    }
    return j;
}

void deliver(const RunConfig& cfg, const std::string& payload) {
    if (cfg.out.empty())
        std::cout << payload;
    else
        write_file(cfg.out, payload);
}

std::string wrap_report(const RunConfig& cfg, const json& hashes, json body) {
    body["config"] = config_echo(cfg);
    body["inputs"] = hashes;
    return body.dump(2) + "\n";
}

std::string csv_with_banner(const RunConfig& cfg, const json& hashes, const std::string& table) {
    std::ostringstream os;
    os << "# config " << config_echo(cfg).dump() << "\n";
    os << "# inputs " << hashes.dump() << "\n";
    os << table;
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"split-map arithmetic dynamics toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string map_spec, map2_spec, curve_spec = "diagonal", family_spec, point_spec;
    std::string section_spec = "0", t1_spec = "0", t2_spec = "-2", tlist1, tlist2;
    unsigned m = 1, n = 1, period = 8;
    double eps = 0.01;
    long t_min = 2, t_max = 100;

    auto* c_height = app.add_subcommand("height", "certified canonical height of a Q-point");
    c_height->add_option("--map", map_spec, "map alias or JSON file")->required();
    c_height->add_option("--point", point_spec, "rational point p/q or inf")->required();
    add_common(c_height, cfg);

    auto* c_prep = app.add_subcommand("prep", "preperiodic points f^(m+n)(z) = f^m(z)");
    c_prep->add_option("--map", map_spec)->required();
    c_prep->add_option("--m", m, "tail length");
    c_prep->add_option("--n", n, "cycle length");
    add_common(c_prep, cfg);

    auto* c_classify = app.add_subcommand("classify", "exceptional-map classification");
    c_classify->add_option("--map", map_spec)->required();
    add_common(c_classify, cfg);

    auto* c_measure = app.add_subcommand("measure", "sample the measure of maximal entropy");
    c_measure->add_option("--map", map_spec)->required();
    add_common(c_measure, cfg);

    auto* c_energy = app.add_subcommand("energy", "measure-equality test on a curve");
    c_energy->add_option("--map1", map_spec)->required();
    c_energy->add_option("--map2", map2_spec)->required();
    c_energy->add_option("--curve", curve_spec, "curve alias or JSON file");
    add_common(c_energy, cfg);

    auto* c_az = app.add_subcommand("az", "Arakelov-Zhang estimate over Fix(f^n)");
    c_az->add_option("--map1", map_spec)->required();
    c_az->add_option("--map2", map2_spec)->required();
    c_az->add_option("--n", period, "period of the sampling fixed points");
    add_common(c_az, cfg);

    auto* c_scan = app.add_subcommand("family-scan",
                                      "height-inequality fit or per-fiber small-point scan");
    std::string scan_curve;
    c_scan->add_option("--family", family_spec, "family alias (z2pt, z2pt-pair) or JSON file")
        ->required();
    c_scan->add_option("--section", section_spec, "comma-separated t-polynomial coefficients");
    c_scan->add_option("--curve", scan_curve,
                       "curve alias or JSON file; switches to the small-point scan");
    c_scan->add_option("--t-min", t_min);
    c_scan->add_option("--t-max", t_max);
    double scan_eps = 0.01;
    c_scan->add_option("--eps", scan_eps, "height threshold for the small-point scan");
    add_common(c_scan, cfg);

    auto* c_dky = app.add_subcommand("dky", "common small points of (z^2+t1, z^2+t2)");
    c_dky->add_option("--t1", t1_spec);
    c_dky->add_option("--t2", t2_spec);
    c_dky->add_option("--t1-list", tlist1, "comma-separated grid overriding --t1");
    c_dky->add_option("--t2-list", tlist2, "comma-separated grid overriding --t2");
    c_dky->add_option("--eps", eps, "height threshold");
    add_common(c_dky, cfg);

    CLI11_PARSE(app, argc, argv);

    auto parse_list = [](const std::string& s) {
        std::vector<Rat> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
        return out;
    };

    try {
        if (*c_height) {
            RationalMap f = load_map(map_spec);
            json hashes = input_hashes({{"map", map_spec}});
            HeightEstimate h = canonical_height(f, parse_point(point_spec), cfg.tol);
            if (cfg.emit == "csv") {
                deliver(cfg, csv_with_banner(cfg, hashes, height_csv(point_spec, h)));
            } else {
                json body;
                body["value"] = fmt_real(h.value);
                body["error"] = fmt_real(h.error);
                for (const auto& [pl, v] : h.place_breakdown)
                    body["places"][pl.archimedean ? "arch" : pl.prime.get_str()] = fmt_real(v);
                deliver(cfg, wrap_report(cfg, hashes, std::move(body)));
            }
        } else if (*c_prep) {
            RationalMap f = load_map(map_spec);
            json hashes = input_hashes({{"map", map_spec}});
            auto pts = preperiodic_points(f, m, n, cfg.tol < 1e-4 ? cfg.tol : 1e-8);
            if (cfg.emit == "csv") {
                deliver(cfg, csv_with_banner(cfg, hashes, points_csv(pts)));
            } else {
                json body;
                body["count"] = pts.size();
                for (const auto& p : pts)
                    body["points"].push_back(p.near_infinity()
                                                 ? "inf"
                                                 : fmt_real(p.affine().real()) + "+" +
                                                       fmt_real(p.affine().imag()) + "i");
                deliver(cfg, wrap_report(cfg, hashes, std::move(body)));
            }
        } else if (*c_classify) {
            RationalMap f = load_map(map_spec);
            json hashes = input_hashes({{"map", map_spec}});
            ExceptionalClass cls = classify_exceptional(f);
            const char* tags[] = {"PowerConjugate", "ChebyshevConjugate", "LattesLike",
                                  "Ordinary", "Unknown"};
            json body;
            body["class"] = tags[static_cast<int>(cls.tag)];
            body["evidence"] = cls.evidence;
            deliver(cfg, wrap_report(cfg, hashes, std::move(body)));
        } else if (*c_measure) {
            RationalMap f = load_map(map_spec);
            json hashes = input_hashes({{"map", map_spec}});
            EmpiricalMeasure mu =
                backward_sample(f, default_sample_start(f), cfg.depth, cfg.width, cfg.seed);
            if (cfg.emit == "csv") {
                deliver(cfg, csv_with_banner(cfg, hashes, measure_csv(mu)));
            } else {
                json body;
                body["provenance"] = mu.provenance;
                body["csv"] = measure_csv(mu);
                deliver(cfg, wrap_report(cfg, hashes, std::move(body)));
            }
        } else if (*c_energy) {
            RationalMap f = load_map(map_spec), g = load_map(map2_spec);
            CurveP1xP1 c = load_curve(curve_spec);
            json hashes =
                input_hashes({{"map1", map_spec}, {"map2", map2_spec}, {"curve", curve_spec}});
            MeasureParams params;
            params.depth = cfg.depth;
            params.width = cfg.width;
            params.seed = cfg.seed;
            MeasureEqualityReport rep = measure_equality_test(f, g, c, params);
            json body = json::parse(energy_json(rep));
            deliver(cfg, wrap_report(cfg, hashes, std::move(body)));
        } else if (*c_az) {
            RationalMap f = load_map(map_spec), g = load_map(map2_spec);
            json hashes = input_hashes({{"map1", map_spec}, {"map2", map2_spec}});
            HeightEstimate h = arakelov_zhang_estimate(f, g, period, cfg.tol);
            json body;
            body["value"] = fmt_real(h.value);
            body["error"] = fmt_real(h.error);
            body["caveat"] = "no equidistribution rate certified; numeric points use the "
                             "archimedean Green surrogate";
            deliver(cfg, wrap_report(cfg, hashes, std::move(body)));
        } else if (*c_scan && !scan_curve.empty()) {
            // curve mode: per-fiber small-point counts along the parameter
            ParamFamily fam = load_family(family_spec);
            CurveP1xP1 curve = load_curve(scan_curve);
            json hashes = input_hashes({{"family", family_spec}, {"curve", scan_curve}});
            SmallPointBudget budget{cfg.budget_m, cfg.budget_n, 2100};
            std::vector<CurveScanRow> rows;
            for (long t = t_min; t <= t_max; ++t) {
                try {
                    SmallPointReport rep = fiber_small_points(fam, curve, Rat(t), scan_eps, budget);
                    rows.push_back({Rat(t), naive_height(ProjPointQ(Rat(t))), rep.count,
                                    rep.empirical_min});
                } catch (const DegenerateFiber&) {
                    continue; // skipped, not interpolated
                } catch (const SpecialCurve&) {
                    continue;
                }
            }
            if (cfg.emit == "csv") {
                deliver(cfg, csv_with_banner(cfg, hashes, curve_scan_csv(rows)));
            } else {
                json body;
                body["rows"] = rows.size();
                body["csv"] = curve_scan_csv(rows);
                deliver(cfg, wrap_report(cfg, hashes, std::move(body)));
            }
        } else if (*c_scan) {
            ParamFamily fam = load_family(family_spec);
            json hashes = input_hashes({{"family", family_spec}});
            Section section;
            for (const Rat& r : parse_list(section_spec)) section.push_back(r);
            std::vector<Rat> grid;
            for (long t = t_min; t <= t_max; ++t) grid.push_back(Rat(t));
            HeightFit fit = fit_height_inequality(fam, section, grid, cfg.tol);
            if (cfg.emit == "csv") {
                deliver(cfg, csv_with_banner(cfg, hashes, fit_csv(fit)));
            } else {
                json body;
                body["c1"] = fmt_real(fit.c1);
                body["c2"] = fmt_real(fit.c2);
                body["slope_estimate"] = fmt_real(fit.slope_estimate);
                body["violations"] = fit.violations;
                body["isotrivial"] = fit.isotrivial_flag;
                body["support_size"] = fit.support.size();
                for (const Rat& t : fit.skipped) body["skipped"].push_back(t.get_str());
                deliver(cfg, wrap_report(cfg, hashes, std::move(body)));
            }
        } else if (*c_dky) {
            std::vector<Rat> l1 = tlist1.empty() ? std::vector<Rat>{parse_rational(t1_spec)}
                                                 : parse_list(tlist1);
            std::vector<Rat> l2 = tlist2.empty() ? std::vector<Rat>{parse_rational(t2_spec)}
                                                 : parse_list(tlist2);
            json hashes;
            SmallPointBudget budget{cfg.budget_m, cfg.budget_n, 2100};
            DkyTable table = dky_scan(l1, l2, eps, budget);
            if (cfg.emit == "csv") {
                deliver(cfg, csv_with_banner(cfg, hashes, dky_csv(table)));
            } else {
                json body;
                body["max_count"] = table.max_count;
                body["csv"] = dky_csv(table);
                deliver(cfg, wrap_report(cfg, hashes, std::move(body)));
            }
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const NoConvergence& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input degeneracy: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        // DegenerateMap, DegenerateFiber, SpecialCurve, ParseError, ...
        std::cerr << "input degeneracy: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
