#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "distgeo/curvature.hpp"
#include "distgeo/dynamics.hpp"
#include "distgeo/scenario.hpp"
#include "distgeo/sff.hpp"
#include "distgeo/verify.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitExpectFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct GlobalOpts {
    std::string scenario_path;
    std::string fixture;
    std::int64_t seed = -1;
    double tol = -1.0;
    std::string out;
    bool pretty = false;
};

distgeo::ScenarioModel load(const GlobalOpts& g) {
    if (g.scenario_path.empty() == g.fixture.empty())
        throw distgeo::InputError("exactly one of --scenario or --fixture is required");
    distgeo::ScenarioModel s = g.scenario_path.empty()
                                   ? distgeo::builtin_fixture(g.fixture)
                                   : distgeo::load_scenario(g.scenario_path);
    if (g.seed >= 0) s.seed = static_cast<std::uint64_t>(g.seed);
    if (g.tol > 0) s.tol.identity = g.tol;
    return s;
}

void print_json(const json& j, const GlobalOpts& g) {
    if (g.pretty)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << j.dump() << "\n";
}

std::vector<double> parse_point(std::string text, int m, const char* flag) {
    std::string cleaned;
    for (char c : text)
        if (c != '(' && c != ')' && c != ' ') cleaned += c;
    std::vector<double> out;
    std::stringstream ss(cleaned);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw distgeo::InputError(std::string(flag) + ": malformed number '" + item + "'");
        }
    }
    if (static_cast<int>(out.size()) != m)
        throw distgeo::InputError(std::string(flag) + " needs " + std::to_string(m) +
                                  " comma-separated values");
    return out;
}

const distgeo::DistributionModel& need_distribution(const distgeo::ScenarioModel& s) {
    if (!s.distribution)
        throw distgeo::InputError("this command requires a scenario with a distribution");
    return *s.distribution;
}

int run_classify(const GlobalOpts& g, int samples, const std::vector<std::string>& expects) {
    distgeo::ScenarioModel s = load(g);
    const auto& dist = need_distribution(s);
    distgeo::SampleSpec spec = s.sample_spec(samples);

    distgeo::ClassificationReport inv = distgeo::is_involutive(dist, spec, s.tol.identity);
    distgeo::ClassificationReport tg = distgeo::is_totally_geodesic(dist, spec, s.tol.identity);

    json out;
    out["involutive"] = inv.to_json();
    out["totally_geodesic"] = tg.to_json();
    print_json(out, g);

    bool ok = true;
    for (const auto& e : expects) {
        if (e == "involutive") ok = ok && inv.verdict == "holds";
        else if (e == "not-involutive") ok = ok && inv.verdict == "fails";
        else if (e == "totally-geodesic") ok = ok && tg.verdict == "holds";
        else if (e == "not-totally-geodesic") ok = ok && tg.verdict == "fails";
        else throw distgeo::InputError("unknown --expect value '" + e + "'");
    }
    return ok ? kExitOk : kExitExpectFailed;
}

int run_tensors(const GlobalOpts& g, const std::string& at, const std::vector<int>& fields) {
    distgeo::ScenarioModel s = load(g);
    const auto& dist = need_distribution(s);
    const int m = dist.dim();
    const int n = dist.rank();
    std::vector<double> p = parse_point(at, m, "--at");

    distgeo::Mat<double> gm = distgeo::metric_at_spd(dist.base, p);
    distgeo::Frame<double> fr = distgeo::frame_at(dist, p);

    json out;
    out["point"] = p;
    out["frame"]["E"] = fr.E;
    out["frame"]["Z"] = fr.Z;

    auto sff_pair = [&](int a, int b) {
        distgeo::FrameField Ea(dist, distgeo::FrameField::Span::D, a);
        distgeo::FrameField Eb(dist, distgeo::FrameField::Span::D, b);
        return distgeo::sff(dist, Ea, Eb, p);
    };

    if (fields.size() == 3) {
        const int a = fields[0], b = fields[1], j = fields[2];
        if (a < 0 || a >= n || b < 0 || b >= n || j < 0 || j >= m - n)
            throw distgeo::InputError("--fields indices out of range");
        distgeo::SffValue v = sff_pair(a, b);
        out["B"] = v.value;
        out["B_sym"] = v.sym;
        out["B_skew"] = v.skew;
        out["S"] = distgeo::ginner(gm, v.value, fr.Z[j]);
    } else {
        json B = json::array(), Bs = json::array(), Ba = json::array(), S = json::array();
        for (int a = 0; a < n; ++a) {
            json rowB = json::array(), rowBs = json::array(), rowBa = json::array(),
                 rowS = json::array();
            for (int b = 0; b < n; ++b) {
                distgeo::SffValue v = sff_pair(a, b);
                rowB.push_back(v.value);
                rowBs.push_back(v.sym);
                rowBa.push_back(v.skew);
                json svals = json::array();
                for (int j = 0; j < m - n; ++j)
                    svals.push_back(distgeo::ginner(gm, v.value, fr.Z[j]));
                rowS.push_back(svals);
            }
            B.push_back(rowB);
            Bs.push_back(rowBs);
            Ba.push_back(rowBa);
            S.push_back(rowS);
        }
        out["B"] = B;
        out["B_sym"] = Bs;
        out["B_skew"] = Ba;
        out["S"] = S;
    }

    if (dist.corank() == 1) {
        distgeo::HypersurfaceForm h = distgeo::hypersurface_form(dist, p);
        json hj;
        hj["normal"] = h.normal;
        json b = json::array(), bs = json::array(), ba = json::array();
        for (int a = 0; a < n; ++a) {
            json rb = json::array(), rbs = json::array(), rba = json::array();
            for (int c = 0; c < n; ++c) {
                rb.push_back(h.b(a, c));
                rbs.push_back(h.b_sym(a, c));
                rba.push_back(h.b_skew(a, c));
            }
            b.push_back(rb);
            bs.push_back(rbs);
            ba.push_back(rba);
        }
        hj["b"] = b;
        hj["b_sym"] = bs;
        hj["b_skew"] = ba;
        hj["principal_curvatures"] = h.principal_curvatures;
        hj["principal_directions"] = h.principal_directions;
        out["hypersurface"] = hj;
    }

    if (!g.out.empty()) {
        std::ofstream f(g.out);
        f << out.dump(2) << "\n";
    }
    print_json(out, g);
    return kExitOk;
}

int run_curvature(const GlobalOpts& g, const std::string& at, std::vector<int> frame) {
    distgeo::ScenarioModel s = load(g);
    const auto& dist = need_distribution(s);
    std::vector<double> p = parse_point(at, dist.dim(), "--at");

    if (frame.empty()) frame = {0, 1};
    if (frame.size() != 2 && frame.size() != 4)
        throw distgeo::InputError("--frame needs two or four indices");
    for (int i : frame)
        if (i < 0 || i >= dist.rank()) throw distgeo::InputError("--frame index out of range");
    std::vector<int> quad = frame.size() == 4
                                ? frame
                                : std::vector<int>{frame[0], frame[1], frame[0], frame[1]};

    distgeo::FrameField X1(dist, distgeo::FrameField::Span::D, quad[0]);
    distgeo::FrameField X2(dist, distgeo::FrameField::Span::D, quad[1]);
    distgeo::FrameField X3(dist, distgeo::FrameField::Span::D, quad[2]);
    distgeo::FrameField X4(dist, distgeo::FrameField::Span::D, quad[3]);

    distgeo::GaussReport rep = distgeo::gauss_identity(dist, X1, X2, X3, X4, p);
    rep.frame_indices = quad;

    json out = rep.to_json();
    out["sectional_ambient"] = distgeo::sectional_ambient(dist.base, X1, X2, p);
    out["sectional_intrinsic"] = distgeo::sectional_intrinsic(dist, X1, X2, p);
    print_json(out, g);
    return kExitOk;
}

int finish_trajectory(const GlobalOpts& g, const distgeo::ScenarioModel& s,
                      distgeo::Trajectory traj, bool constrained) {
    if (constrained)
        distgeo::annotate_curvatures(*s.distribution, traj);
    else
        distgeo::annotate_curvatures(s.manifold, traj);

    std::string path = g.out.empty() ? "trajectory.csv" : g.out;
    std::ofstream f(path);
    if (!f) throw distgeo::InputError("cannot write CSV to '" + path + "'");
    distgeo::write_csv(traj, f);

    double max_constraint = 0.0, max_dalembert = 0.0;
    if (constrained) {
        const auto& dist = *s.distribution;
        for (const auto& smp : traj.samples) {
            if (smp.constraint_residual)
                max_constraint = std::max(max_constraint, *smp.constraint_residual);
            if (smp.reaction) {
                distgeo::Mat<double> gm = distgeo::metric_at(dist.base, smp.q);
                distgeo::Frame<double> fr = distgeo::frame_at(dist, smp.q);
                max_dalembert = std::max(
                    max_dalembert, distgeo::gnorm(gm, distgeo::project_D(gm, fr, *smp.reaction)));
            }
        }
    }

    const auto& last = traj.back();
    json out;
    out["csv"] = path;
    out["samples"] = traj.samples.size();
    out["final"] = {{"t", last.t}, {"q", last.q}, {"v", last.v}};
    out["max_constraint_residual"] = max_constraint;
    out["max_dalembert_residual"] = max_dalembert;
    if (traj.error) out["error"] = *traj.error;
    print_json(out, g);
    return traj.error ? kExitNumeric : kExitOk;
}

int run_geodesic(const GlobalOpts& g, const std::string& type, const std::string& q0s,
                 const std::string& v0s, double T, double dt) {
    distgeo::ScenarioModel s = load(g);
    const int m = s.manifold.dim();
    std::vector<double> q0 = parse_point(q0s, m, "--q0");
    std::vector<double> v0 = parse_point(v0s, m, "--v0");

    if (type == "ambient") {
        return finish_trajectory(g, s, distgeo::geodesic_ambient(s.manifold, q0, v0, T, dt),
                                 false);
    }
    if (type == "intrinsic") {
        const auto& dist = need_distribution(s);
        return finish_trajectory(g, s, distgeo::geodesic_intrinsic(dist, q0, v0, T, dt), true);
    }
    throw distgeo::InputError("--type must be ambient or intrinsic");
}

int run_simulate(const GlobalOpts& g, const std::string& q0s, const std::string& v0s, double T,
                 double dt, bool force_from_scenario) {
    distgeo::ScenarioModel s = load(g);
    const int m = s.manifold.dim();
    std::vector<double> q0 = parse_point(q0s, m, "--q0");
    std::vector<double> v0 = parse_point(v0s, m, "--v0");

    std::unique_ptr<distgeo::ModelField> force;
    if (force_from_scenario) {
        if (!s.force) throw distgeo::InputError("scenario declares no force field");
        force = std::make_unique<distgeo::ModelField>(*s.force);
    }

    if (s.distribution) {
        return finish_trajectory(
            g, s, distgeo::nonholonomic(*s.distribution, force.get(), q0, v0, T, dt), true);
    }
    return finish_trajectory(g, s, distgeo::newton(s.manifold, force.get(), q0, v0, T, dt),
                             false);
}

int run_verify_cmd(const GlobalOpts& g, int samples) {
    distgeo::ScenarioModel s = load(g);
    std::uint64_t seed = g.seed >= 0 ? static_cast<std::uint64_t>(g.seed) : s.seed;
    auto results = distgeo::run_verify(s, samples, seed);
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("[%s] %-38s max_residual=%.3e tol=%.1e\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.max_residual, r.tol);
        all_pass = all_pass && r.pass;
    }
    std::printf("%s: %zu invariants checked\n", all_pass ? "OK" : "FAILED", results.size());
    return all_pass ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distgeo: numeric geometry of regular distributions in Riemannian manifolds"};
    app.require_subcommand(1);

    GlobalOpts g;
    auto add_global = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", g.scenario_path, "scenario TOML file");
        cmd->add_option("--fixture", g.fixture, "builtin fixture name");
        cmd->add_option("--seed", g.seed, "override the scenario seed");
        cmd->add_option("--tol", g.tol, "override the identity tolerance");
        cmd->add_option("--out", g.out, "output path (CSV or JSON)");
        cmd->add_flag("--pretty", g.pretty, "indent JSON output");
    };

    auto* classify = app.add_subcommand("classify", "involutivity and total geodesy verdicts");
    int samples = 64;
    std::vector<std::string> expects;
    add_global(classify);
    classify->add_option("--samples", samples, "sample count");
    classify->add_option("--expect", expects,
                         "expected verdicts: involutive|not-involutive|totally-geodesic|not-"
                         "totally-geodesic");

    auto* tensors = app.add_subcommand("tensors", "second fundamental form tables at a point");
    std::string at;
    std::vector<int> field_sel;
    add_global(tensors);
    tensors->add_option("--at", at, "evaluation point, comma separated")->required();
    tensors->add_option("--fields", field_sel, "indices a b j selecting S(E_a, E_b, Z_j)")
        ->expected(3);

    auto* curvature = app.add_subcommand("curvature", "curvature comparison at a point");
    std::string cat;
    std::vector<int> frame_sel;
    add_global(curvature);
    curvature->add_option("--at", cat, "evaluation point, comma separated")->required();
    curvature->add_option("--frame", frame_sel, "frame indices (pair or quadruple)");

    auto* geodesic = app.add_subcommand("geodesic", "integrate a geodesic");
    std::string gtype = "ambient", q0s, v0s;
    double T = 1.0, dt = 1e-3;
    add_global(geodesic);
    geodesic->add_option("--type", gtype, "ambient|intrinsic");
    geodesic->add_option("--q0", q0s, "initial point")->required();
    geodesic->add_option("--v0", v0s, "initial velocity")->required();
    geodesic->add_option("--T", T, "final time");
    geodesic->add_option("--dt", dt, "time step");

    auto* simulate = app.add_subcommand("simulate", "integrate forced (constrained) dynamics");
    std::string sq0, sv0;
    double sT = 1.0, sdt = 1e-3;
    bool force_from_scenario = false;
    add_global(simulate);
    simulate->add_option("--q0", sq0, "initial point")->required();
    simulate->add_option("--v0", sv0, "initial velocity")->required();
    simulate->add_option("--T", sT, "final time");
    simulate->add_option("--dt", sdt, "time step");
    simulate->add_flag("--force-from-scenario", force_from_scenario,
                       "apply the scenario force field");

    auto* verify = app.add_subcommand("verify", "run the invariant battery");
    int vsamples = 64;
    add_global(verify);
    verify->add_option("--samples", vsamples, "sample count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitInput;
    }

    try {
        if (classify->parsed()) return run_classify(g, samples, expects);
        if (tensors->parsed()) return run_tensors(g, at, field_sel);
        if (curvature->parsed()) return run_curvature(g, cat, frame_sel);
        if (geodesic->parsed()) return run_geodesic(g, gtype, q0s, v0s, T, dt);
        if (simulate->parsed()) return run_simulate(g, sq0, sv0, sT, sdt, force_from_scenario);
        if (verify->parsed()) return run_verify_cmd(g, vsamples);
    } catch (const distgeo::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const distgeo::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const distgeo::Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitInput;
}
