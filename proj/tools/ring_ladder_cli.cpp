// ring-ladder: CLI front end for the coupled-ring condensate library.
//
// Subcommands: simulate, classify, compare, portrait, landscape, sweep,
// setup-params.  Options can come from flags or a JSON config file
// (flags > config > defaults); the schema ships in docs/config_schema.json.
// Exit codes: 0 ok, 2 config error, 3 runtime error, 4 verification failure.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ring_ladder/analytic.hpp"
#include "ring_ladder/format.hpp"
#include "ring_ladder/meanfield.hpp"
#include "ring_ladder/mqst.hpp"
#include "ring_ladder/qubit.hpp"
#include "ring_ladder/setup.hpp"

using json = nlohmann::ordered_json;
using namespace ring_ladder;

namespace {

struct ConfigFile {
    json doc = json::object();
    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
        in >> doc;
    }
    // flags > config > defaults: pull block.key into var unless the flag was
    // given on the command line
    void fill(const CLI::App* cmd, const std::string& flag,
              const std::string& block, const std::string& key,
              double& var) const {
        const auto* opt = cmd->get_option_no_throw(flag);
        if (opt && opt->count() > 0) return;
        if (doc.contains(block) && doc[block].contains(key))
            var = doc[block][key].get<double>();
    }
    void fill(const CLI::App* cmd, const std::string& flag,
              const std::string& block, const std::string& key,
              int& var) const {
        const auto* opt = cmd->get_option_no_throw(flag);
        if (opt && opt->count() > 0) return;
        if (doc.contains(block) && doc[block].contains(key))
            var = doc[block][key].get<int>();
    }
    void fill(const CLI::App* cmd, const std::string& flag,
              const std::string& block, const std::string& key,
              std::string& var) const {
        const auto* opt = cmd->get_option_no_throw(flag);
        if (opt && opt->count() > 0) return;
        if (doc.contains(block) && doc[block].contains(key))
            var = doc[block][key].get<std::string>();
    }
    void fill(const CLI::App* cmd, const std::string& flag,
              const std::string& block, const std::string& key,
              std::vector<double>& var) const {
        const auto* opt = cmd->get_option_no_throw(flag);
        if (opt && opt->count() > 0) return;
        if (doc.contains(block) && doc[block].contains(key))
            var = doc[block][key].get<std::vector<double>>();
    }
};

struct SystemOpts {
    double lambda_rho = 0.0, delta = 0.0, z0 = 0.0, theta0 = 0.0;
};

struct IntegrateOpts {
    double s_max = 20.0, rel_tol = 1e-10, abs_tol = 1e-10, sample_ds = 0.01;
};

void add_system_flags(CLI::App* cmd, SystemOpts& s, bool with_z0 = true) {
    cmd->add_option("--lambda-rho", s.lambda_rho,
                    "interaction parameter lambda*rho");
    cmd->add_option("--delta", s.delta, "drive Delta");
    if (with_z0) cmd->add_option("--z0", s.z0, "initial imbalance");
    cmd->add_option("--theta0", s.theta0, "initial phase (radians)");
}

void add_integrate_flags(CLI::App* cmd, IntegrateOpts& o) {
    cmd->add_option("--s-max", o.s_max, "integration span in s-tilde");
    cmd->add_option("--rel-tol", o.rel_tol, "relative tolerance");
    cmd->add_option("--abs-tol", o.abs_tol, "absolute tolerance");
    cmd->add_option("--sample-ds", o.sample_ds, "output sample spacing");
}

void fill_system(const ConfigFile& cf, const CLI::App* cmd, SystemOpts& s) {
    cf.fill(cmd, "--lambda-rho", "system", "lambda_rho", s.lambda_rho);
    cf.fill(cmd, "--delta", "system", "delta", s.delta);
    cf.fill(cmd, "--z0", "system", "z0", s.z0);
    cf.fill(cmd, "--theta0", "system", "theta0", s.theta0);
}

void fill_integrate(const ConfigFile& cf, const CLI::App* cmd,
                    IntegrateOpts& o) {
    cf.fill(cmd, "--s-max", "integrate", "s_max", o.s_max);
    cf.fill(cmd, "--rel-tol", "integrate", "rel_tol", o.rel_tol);
    cf.fill(cmd, "--abs-tol", "integrate", "abs_tol", o.abs_tol);
    cf.fill(cmd, "--sample-ds", "integrate", "sample_ds", o.sample_ds);
}

// collect every violated precondition before refusing to run
std::vector<std::string> validate_run(const SystemOpts& s,
                                      const IntegrateOpts& o) {
    std::vector<std::string> bad;
    if (std::fabs(s.z0) > 1.0) bad.push_back("z0 must satisfy |z0| <= 1");
    if (s.lambda_rho < 0.0) bad.push_back("lambda-rho must be >= 0");
    if (!(o.s_max > 0.0)) bad.push_back("s-max must be > 0");
    if (!(o.rel_tol > 0.0) || o.rel_tol > 1e-3)
        bad.push_back("rel-tol must lie in (0, 1e-3]");
    if (!(o.abs_tol > 0.0) || o.abs_tol > 1e-3)
        bad.push_back("abs-tol must lie in (0, 1e-3]");
    if (!(o.sample_ds > 0.0)) bad.push_back("sample-ds must be > 0");
    return bad;
}

int fail_config(const std::vector<std::string>& bad) {
    std::cerr << "config error:\n";
    for (const auto& b : bad) std::cerr << "  - " << b << "\n";
    return 2;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file " + path);
    return file;
}

json regime_json(const RegimeReport& r) {
    auto num = [](double v) -> json {
        if (std::isnan(v)) return nullptr;
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return v;
    };
    json j;
    j["branch"] = branch_name(r.branch);
    j["lambda_rho"] = r.lambda_rho;
    j["delta"] = r.delta;
    j["z0"] = r.z0;
    j["theta0"] = r.theta0;
    j["H0"] = r.H0;
    j["D"] = num(r.D);
    j["k"] = num(r.k);
    j["C"] = num(r.C);
    j["alpha"] = num(r.alpha);
    j["zeta_sq"] = num(r.zeta_sq);
    j["g2"] = num(r.g2);
    j["g3"] = num(r.g3);
    j["discriminant"] = num(r.disc);
    j["cubic_roots"] = json::array();
    for (int i = 0; i < r.n_real; ++i) j["cubic_roots"].push_back(r.roots[i]);
    j["period"] = num(r.period);
    j["periodic"] = r.periodic;
    j["mean_Z"] = r.mean_Z;
    j["amplitude"] = r.amplitude;
    j["mqst"] = r.mqst;
    const auto ci = critical_imbalance(r.lambda_rho, r.theta0);
    j["Zc"] = ci.has_threshold ? json(ci.Zc) : json(nullptr);
    return j;
}

int cmd_simulate(const SystemOpts& s, const IntegrateOpts& o,
                 const std::string& out_path) {
    const auto bad = validate_run(s, o);
    if (!bad.empty()) return fail_config(bad);
    try {
        const SystemParams p{s.lambda_rho, s.delta, 1.0, {}};
        const auto traj = integrate(p, s.z0, s.theta0, o.s_max, o.rel_tol,
                                    o.abs_tol, o.sample_ds);
        std::ofstream file;
        write_trajectory_csv(traj, open_output(file, out_path));
    } catch (const std::exception& e) {
        std::cerr << "integration failed: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

int cmd_classify(const SystemOpts& s, const std::string& out_path) {
    if (std::fabs(s.z0) > 1.0 || s.lambda_rho < 0.0)
        return fail_config(validate_run(s, IntegrateOpts{}));
    try {
        const SystemParams p{s.lambda_rho, s.delta, 1.0, {}};
        const auto rep = classify(p, s.z0, s.theta0);
        std::ofstream file;
        open_output(file, out_path) << regime_json(rep).dump(2) << "\n";
    } catch (const std::exception& e) {
        std::cerr << "classification failed: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

// oscillation period and mean measured between upward crossings of the
// coarse record mean (whole periods only, so the average is unbiased)
void measured_period_mean(const std::vector<double>& t,
                          const std::vector<double>& z, double* period,
                          double* mean) {
    double zbar = 0.0;
    for (double v : z) zbar += v;
    zbar /= double(z.size());
    std::vector<double> tc;
    std::vector<std::size_t> ic;
    for (std::size_t i = 0; i + 1 < z.size(); ++i)
        if (z[i] < zbar && z[i + 1] >= zbar) {
            const double w = (zbar - z[i]) / (z[i + 1] - z[i]);
            tc.push_back(t[i] + w * (t[i + 1] - t[i]));
            ic.push_back(i);
        }
    if (tc.size() < 2) {
        *period = std::numeric_limits<double>::quiet_NaN();
        *mean = zbar;
        return;
    }
    *period = (tc.back() - tc.front()) / double(tc.size() - 1);
    const std::size_t i0 = ic.front(), i1 = ic.back();
    double acc = (z[i0 + 1] + zbar) / 2.0 * (t[i0 + 1] - tc.front());
    for (std::size_t i = i0 + 1; i < i1; ++i)
        acc += (z[i] + z[i + 1]) / 2.0 * (t[i + 1] - t[i]);
    acc += (z[i1] + zbar) / 2.0 * (tc.back() - t[i1]);
    *mean = acc / (tc.back() - tc.front());
}

// near-separatrix orbits hover near a hyperbolic point and amplify local
// error exponentially; switch the oracle to extended precision there
bool needs_quad_reference(const RegimeReport& r) {
    if (r.branch == Branch::DELTA0_K_EQ1 ||
        r.branch == Branch::GEN_DELTA_ZERO_DECAY ||
        r.branch == Branch::GEN_DELTA_ZERO_OSC ||
        r.branch == Branch::FROZEN_INF)
        return true;
    if (!std::isnan(r.k) && std::fabs(r.k - 1.0) < 1e-3) return true;
    if (!std::isnan(r.disc)) {
        const double s3 = std::fabs(r.g2 * r.g2 * r.g2);
        const double s27 = 27.0 * r.g3 * r.g3;
        if (std::fabs(r.disc) <= 1e-4 * std::max(s3, s27)) return true;
    }
    return false;
}

int cmd_compare(const SystemOpts& s, const IntegrateOpts& o, double max_z_err,
                double period_rel_err, double mean_err, bool corrupt_k,
                const std::string& out_path) {
    const auto bad = validate_run(s, o);
    if (!bad.empty()) return fail_config(bad);
    try {
        const SystemParams p{s.lambda_rho, s.delta, 1.0, {}};
        const auto rep = classify(p, s.z0, s.theta0);
        auto analytic = [&](double st) {
            return corrupt_k
                       ? solve_delta0_nosqrt_k(p, s.z0, s.theta0, st, nullptr)
                       : analytic_Z(p, s.z0, s.theta0, st);
        };
        std::vector<double> ts, zs;
        if (needs_quad_reference(rep)) {
#ifdef RING_LADDER_HAVE_FLOAT128
            using Q = __float128;
            Q z0q = Q(s.z0), th0q = Q(s.theta0);
            if (rep.branch == Branch::FROZEN_INF)
                refine_frozen<Q>(Q(s.lambda_rho), Q(s.delta), z0q, th0q);
            else
                z0q = refine_degenerate_z0<Q>(rep.branch, Q(s.lambda_rho),
                                              Q(s.delta), z0q, th0q);
            reference_trajectory<Q>(
                Q(s.lambda_rho), Q(s.delta), z0q, th0q, Q(o.s_max),
                Q(1) / Q(2048), Q(o.sample_ds),
                [&](Q st, Q Z, Q) {
                    ts.push_back(double(st));
                    zs.push_back(double(Z));
                });
#else
            long double z0l = s.z0, th0l = s.theta0;
            if (rep.branch == Branch::FROZEN_INF)
                refine_frozen<long double>(s.lambda_rho, s.delta, z0l, th0l);
            else
                z0l = refine_degenerate_z0<long double>(
                    rep.branch, s.lambda_rho, s.delta, z0l, th0l);
            reference_trajectory<long double>(
                s.lambda_rho, s.delta, z0l, th0l, (long double)o.s_max,
                1.0L / 2048, (long double)o.sample_ds,
                [&](long double st, long double Z, long double) {
                    ts.push_back(double(st));
                    zs.push_back(double(Z));
                });
#endif
        } else {
            const auto traj = integrate(p, s.z0, s.theta0, o.s_max,
                                        1e-12, 1e-12, o.sample_ds);
            for (const auto& smp : traj.samples) {
                ts.push_back(smp.s_tilde);
                zs.push_back(smp.Z);
            }
        }
        double mz = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i)
            mz = std::max(mz, std::fabs(analytic(ts[i]) - zs[i]));
        json j;
        j["branch"] = branch_name(rep.branch);
        j["max_abs_z_error"] = mz;
        bool ok = mz <= max_z_err;
        if (rep.periodic) {
            double pm, mean_num;
            measured_period_mean(ts, zs, &pm, &mean_num);
            if (std::isnan(pm)) {
                j["period_rel_error"] = nullptr;
            } else {
                const double pe = std::fabs(pm - rep.period) / rep.period;
                j["period_rel_error"] = pe;
                ok = ok && pe <= period_rel_err;
            }
            const double me = std::fabs(mean_num - rep.mean_Z);
            j["mean_Z_error"] = me;
            ok = ok && me <= mean_err;
        } else {
            j["period_rel_error"] = nullptr;
            j["mean_Z_error"] = nullptr;
        }
        j["pass"] = ok;
        std::ofstream file;
        open_output(file, out_path) << j.dump(2) << "\n";
        return ok ? 0 : 4;
    } catch (const std::exception& e) {
        std::cerr << "compare failed: " << e.what() << "\n";
        return 3;
    }
}

int cmd_portrait(const SystemOpts& s, const std::vector<double>& z0s,
                 const std::string& out_path) {
    if (z0s.empty()) {
        std::cerr << "config error:\n  - at least one --z0 value required\n";
        return 2;
    }
    for (double z : z0s)
        if (std::fabs(z) > 1.0)
            return fail_config({"every z0 must satisfy |z0| <= 1"});
    try {
        std::ofstream file;
        auto& os = open_output(file, out_path);
        os << "Theta_over_pi,Z,curve_id,topology\n";
        const SystemParams p{s.lambda_rho, s.delta, 1.0, {}};
        int id = 0;
        for (double z : z0s) {
            const auto curve = portrait_curve(p, z, s.theta0, id);
            const char* topo =
                curve.topology == CurveTopology::closed ? "closed" : "running";
            for (std::size_t i = 0; i < curve.Z.size(); ++i)
                os << fmt_g(curve.Theta[i] / M_PI) << ',' << fmt_g(curve.Z[i])
                   << ',' << id << ',' << topo << '\n';
            ++id;
        }
    } catch (const std::exception& e) {
        std::cerr << "portrait failed: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

int cmd_landscape(double E_J, double E_Jp_ratio, double Phi_diff, int N,
                  int grid, const std::string& out_path,
                  const std::string& minima_path) {
    std::vector<std::string> bad;
    if (!(E_J > 0.0)) bad.push_back("E-J must be > 0");
    if (N < 4 || N % 2 != 0) bad.push_back("N must be even and >= 4");
    if (grid < 64) bad.push_back("grid must be >= 64");
    if (!bad.empty()) return fail_config(bad);
    try {
        QubitParams q;
        q.E_J = E_J;
        q.E_Jp = E_Jp_ratio * E_J;
        // symmetric gauge: the twist difference is what matters physically
        q.Phi_a = Phi_diff / 2.0;
        q.Phi_b = -Phi_diff / 2.0;
        q.N = N;
        const auto ls = find_minima(q, grid);
        std::ofstream file;
        auto& os = open_output(file, out_path);
        os << "theta_a,theta_b,U\n";
        for (int i = 0; i < ls.grid_resolution; ++i)
            for (int j = 0; j < ls.grid_resolution; ++j)
                os << fmt_g(ls.axis[i]) << ',' << fmt_g(ls.axis[j]) << ','
                   << fmt_g(ls.grid_U[std::size_t(i) * ls.grid_resolution + j])
                   << '\n';
        json j;
        j["minima"] = json::array();
        for (const auto& m : ls.minima)
            j["minima"].push_back(
                {{"theta_a", m.theta_a}, {"theta_b", m.theta_b}, {"U", m.U}});
        j["barriers"] = ls.barriers;
        j["intra_cell_barrier"] = ls.intra_cell_barrier;
        j["inter_cell_barrier"] = ls.inter_cell_barrier;
        j["barrier_ratio"] = ls.barrier_ratio;
        std::ofstream mfile;
        open_output(mfile, minima_path) << j.dump(2) << "\n";
    } catch (const std::exception& e) {
        std::cerr << "landscape failed: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

int resolve_jobs(int jobs_flag) {
    if (jobs_flag > 0) return jobs_flag;
    if (const char* env = std::getenv("RING_LADDER_JOBS")) {
        const int j = std::atoi(env);
        if (j > 0) return j;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? int(hc) : 1;
}

int cmd_sweep(const SystemOpts& base, const std::string& axis, double from,
              double to, int steps, int jobs_flag,
              const std::string& out_path) {
    std::vector<std::string> bad;
    if (axis != "z0" && axis != "lambda_rho" && axis != "delta" &&
        axis != "theta0")
        bad.push_back("axis must be one of z0, lambda_rho, delta, theta0");
    if (steps < 2) bad.push_back("steps must be >= 2");
    if (!bad.empty()) return fail_config(bad);
    const int jobs = resolve_jobs(jobs_flag);
    std::vector<std::string> rows(steps);
    std::vector<std::string> errors(steps);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= steps) return;
            const double v = from + (to - from) * i / (steps - 1);
            SystemOpts s = base;
            if (axis == "z0") s.z0 = v;
            else if (axis == "lambda_rho") s.lambda_rho = v;
            else if (axis == "delta") s.delta = v;
            else s.theta0 = v;
            std::ostringstream row;
            try {
                const SystemParams p{s.lambda_rho, s.delta, 1.0, {}};
                const auto r = classify(p, s.z0, s.theta0);
                const double kt = std::isnan(r.k)
                                      ? r.k
                                      : (r.k < 1.0 ? r.k : 1.0 / r.k);
                row << fmt_g(v) << ',' << branch_name(r.branch) << ','
                    << fmt_g(r.H0) << ',' << fmt_g(r.k) << ',' << fmt_g(kt)
                    << ',' << fmt_g(r.disc) << ',' << fmt_g(r.period) << ','
                    << fmt_g(r.mean_Z) << ',' << fmt_g(r.amplitude) << ','
                    << (r.mqst ? 1 : 0);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
            rows[i] = row.str();
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (int i = 0; i < steps; ++i)
        if (!errors[i].empty()) {
            std::cerr << "sweep failed at step " << i << ": " << errors[i]
                      << "\n";
            return 3;
        }
    try {
        std::ofstream file;
        auto& os = open_output(file, out_path);
        os << axis
           << ",branch,H0,k,k_tilde,discriminant,period,mean_Z,amplitude,"
              "mqst\n";
        for (const auto& r : rows) os << r << '\n';
    } catch (const std::exception& e) {
        std::cerr << "sweep output failed: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

int cmd_setup_params(double wavelength, double focal, double beam_sep, int l,
                     double r0, double V0, double mass,
                     const std::string& out_path) {
    std::vector<std::string> bad;
    if (!(wavelength > 0.0)) bad.push_back("wavelength must be > 0");
    if (!(focal > 0.0)) bad.push_back("focal-length must be > 0");
    if (!(beam_sep > 0.0)) bad.push_back("beam-sep must be > 0");
    if (l < 1) bad.push_back("l must be >= 1");
    if (!(r0 > 0.0)) bad.push_back("r0 must be > 0");
    if (!(mass > 0.0)) bad.push_back("mass must be > 0");
    if (!bad.empty()) return fail_config(bad);
    try {
        OpticalSetup s{V0 / 4.0, l, 0.0, wavelength, focal, beam_sep, mass, r0};
        s.k_LG = k_gauss(s);
        const double d = ring_spacing(s);
        json j;
        j["ring_spacing"] = d;
        j["k_gauss"] = k_gauss(s);
        j["ring_radius"] = peak_radius(l, r0);
        j["well_depth_scale"] = well_depth_scale(l);
        if (V0 > 0.0) {
            const auto tr = inter_ring_tunneling(V0, d, mass, 1.0);
            j["inter_ring_tunneling"] = tr.g;
            j["shallow_lattice_warning"] = tr.shallow_warning;
        }
        std::ofstream file;
        open_output(file, out_path) << j.dump(2) << "\n";
    } catch (const std::exception& e) {
        std::cerr << "setup-params failed: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled ring-condensate dynamics toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    ConfigFile cf;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file")
        ->expected(1);

    SystemOpts sys;
    IntegrateOpts integ;
    std::string out_path, minima_path;
    std::vector<double> z0_list;
    double max_z_err = 1e-6, period_rel_err = 1e-4, mean_err = 1e-4;
    bool corrupt_k = false;
    double E_J = 1.0, E_Jp_ratio = 0.8, Phi_diff = M_PI;
    int N = 20, grid = 128;
    std::string axis = "z0";
    double from = 0.0, to = 1.0;
    int steps = 100, jobs = 0;
    double wavelength = 830e-9, focal = 40e-3, beam_sep = 5.5e-3;
    int l_index = 16;
    double r0 = 100e-6, V0 = 0.0, mass = 1.0;

    auto* sim = app.add_subcommand("simulate", "integrate one trajectory");
    add_system_flags(sim, sys);
    add_integrate_flags(sim, integ);
    sim->add_option("--output,-o", out_path, "output CSV path (default stdout)");

    auto* cls = app.add_subcommand("classify", "regime report for one start");
    add_system_flags(cls, sys);
    cls->add_option("--output,-o", out_path, "output JSON path");

    auto* cmp = app.add_subcommand("compare", "analytic vs numeric oracle");
    add_system_flags(cmp, sys);
    add_integrate_flags(cmp, integ);
    cmp->add_option("--max-z-err", max_z_err, "threshold on max |dZ|");
    cmp->add_option("--period-rel-err", period_rel_err,
                    "threshold on relative period error");
    cmp->add_option("--mean-err", mean_err, "threshold on mean-Z error");
    cmp->add_flag("--corrupt-k", corrupt_k,
                  "negative control: modulus without its square root");
    cmp->add_option("--output,-o", out_path, "output JSON path");

    auto* por = app.add_subcommand("portrait", "phase-plane curves");
    add_system_flags(por, sys, false);
    por->add_option("--z0-list", z0_list, "initial imbalances, one curve each");
    por->add_option("--output,-o", out_path, "output CSV path");

    auto* lnd = app.add_subcommand("landscape", "qubit potential landscape");
    lnd->add_option("--e-j", E_J, "intra-ring Josephson scale");
    lnd->add_option("--e-jp-ratio", E_Jp_ratio, "E_J'/E_J");
    lnd->add_option("--phi-diff", Phi_diff, "Phi_a - Phi_b (radians)");
    lnd->add_option("--n-sites", N, "sites per ring (even)");
    lnd->add_option("--grid", grid, "grid resolution per axis");
    lnd->add_option("--output,-o", out_path, "grid CSV path");
    lnd->add_option("--minima-output", minima_path, "minima JSON path");

    auto* swp = app.add_subcommand("sweep", "classify along a parameter axis");
    add_system_flags(swp, sys);
    swp->add_option("--axis", axis, "z0 | lambda_rho | delta | theta0");
    swp->add_option("--from", from, "axis start");
    swp->add_option("--to", to, "axis end");
    swp->add_option("--steps", steps, "number of grid points");
    swp->add_option("--jobs", jobs,
                    "worker threads (default RING_LADDER_JOBS or cores)");
    swp->add_option("--output,-o", out_path, "output CSV path");

    auto* stp = app.add_subcommand("setup-params", "optical geometry numbers");
    stp->add_option("--wavelength", wavelength, "Gaussian beam wavelength (m)");
    stp->add_option("--focal-length", focal, "lens focal length (m)");
    stp->add_option("--beam-sep", beam_sep, "distance between beams (m)");
    stp->add_option("--l-index", l_index, "azimuthal index / sites per ring");
    stp->add_option("--r0", r0, "beam waist (m)");
    stp->add_option("--v0", V0, "well depth (energy, 0 = skip tunneling)");
    stp->add_option("--mass", mass, "atomic mass");
    stp->add_option("--output,-o", out_path, "output JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) cf.load(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error:\n  - " << e.what() << "\n";
        return 2;
    }

    CLI::App* cmd = app.get_subcommands().front();
    fill_system(cf, cmd, sys);
    fill_integrate(cf, cmd, integ);
    cf.fill(cmd, "--output", "output", "path", out_path);
    cf.fill(cmd, "--axis", "sweep", "axis", axis);
    cf.fill(cmd, "--from", "sweep", "from", from);
    cf.fill(cmd, "--to", "sweep", "to", to);
    cf.fill(cmd, "--steps", "sweep", "steps", steps);
    cf.fill(cmd, "--jobs", "sweep", "jobs", jobs);
    cf.fill(cmd, "--e-j", "qubit", "E_J", E_J);
    cf.fill(cmd, "--e-jp-ratio", "qubit", "E_Jp_ratio", E_Jp_ratio);
    cf.fill(cmd, "--phi-diff", "qubit", "Phi_diff", Phi_diff);
    cf.fill(cmd, "--n-sites", "qubit", "N", N);
    cf.fill(cmd, "--grid", "qubit", "grid", grid);
    cf.fill(cmd, "--z0-list", "portrait", "z0_list", z0_list);

    if (cmd == sim) return cmd_simulate(sys, integ, out_path);
    if (cmd == cls) return cmd_classify(sys, out_path);
    if (cmd == cmp)
        return cmd_compare(sys, integ, max_z_err, period_rel_err, mean_err,
                           corrupt_k, out_path);
    if (cmd == por) return cmd_portrait(sys, z0_list, out_path);
    if (cmd == lnd)
        return cmd_landscape(E_J, E_Jp_ratio, Phi_diff, N, grid, out_path,
                             minima_path);
    if (cmd == swp)
        return cmd_sweep(sys, axis, from, to, steps, jobs, out_path);
    if (cmd == stp)
        return cmd_setup_params(wavelength, focal, beam_sep, l_index, r0, V0,
                                mass, out_path);
    return 2;
}
