// Command-line front end.
//
// Subcommands: gen, analyze, reconstruct, repair, flow, sweep.
// Data goes to files (or stdout where noted); status lines go to stderr.
// Exit codes: 0 success; 1 usage error; 2 singular Gram matrix / failed
// repair (analyze exits 2 when the constellation is not a basis); 3 I/O or
// format error.  Reruns with identical flags and seed produce byte-identical
// outputs.

#include <spinframe/spinframe.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace spinframe;

std::string fmt(double x) { return detail::fmt_double(x); }

/// Median with the even-count convention "average of the middle two".
double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct GenArgs {
    std::string spin;
    std::string kind = "regular";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> label;
    std::string out;
};

int run_gen(const GenArgs& a) {
    const SpinLabel s = SpinLabel::parse(a.spin);
    Constellation M = [&] {
        if (a.kind == "regular") return regular_hedgehog(s);
        if (a.kind == "fibonacci") return fibonacci_constellation(s);
        if (a.kind == "random") {
            if (!a.seed)
                throw std::invalid_argument("gen: --seed is required for --kind random");
            return random_constellation(s, *a.seed);
        }
        throw std::invalid_argument("gen: unknown kind '" + a.kind + "'");
    }();
    if (a.label) M = Constellation(s, M.vectors(), *a.label);
    const std::filesystem::path out(a.out);
    if (out.extension() == ".csv")
        save_constellation_csv(M, out);
    else
        save_constellation(M, out);
    std::cerr << "gen: wrote " << M.size() << " vectors (spin " << s.str() << ", " << a.kind
              << ") to " << a.out << "\n";
    return 0;
}

struct AnalyzeArgs {
    std::string in;
    std::optional<double> tau;
    std::optional<std::string> out;
};

int run_analyze(const AnalyzeArgs& a) {
    const Constellation M = load_constellation(a.in);
    const double tau = a.tau ? *a.tau : default_basis_tau(M.spin());
    const FrameDiagnostics d = diagnostics(gram(M), tau);
    std::cout << "det = " << fmt(d.det) << "\n";
    std::cout << "log_abs_det = " << (d.log_abs_det_finite ? fmt(d.log_abs_det) : "-inf") << "\n";
    std::cout << "min_eigenvalue = " << fmt(d.eigenvalues(0)) << "\n";
    std::cout << "max_eigenvalue = " << fmt(d.eigenvalues(d.eigenvalues.size() - 1)) << "\n";
    std::cout << "condition_number = "
              << (d.condition_number_finite ? fmt(d.condition_number) : "inf") << "\n";
    std::cout << "is_basis = " << (d.is_basis ? "true" : "false") << "\n";
    std::cout << "tau = " << fmt(d.tau) << "\n";
    if (a.out) {
        save_diagnostics(d, *a.out);
        std::cerr << "analyze: wrote diagnostics to " << *a.out << "\n";
    }
    if (!d.is_basis) {
        std::cerr << "analyze: constellation fails the spectral gate (not a basis)\n";
        return 2;
    }
    return 0;
}

struct ReconstructArgs {
    std::string in;
    std::string out;
    std::optional<double> tau;
    std::optional<std::string> spin;
};

int run_reconstruct(const ReconstructArgs& a) {
    const QSample q = load_qsample_csv(a.in);
    const SpinLabel s = q.constellation.spin();
    if (a.spin && SpinLabel::parse(*a.spin) != s)
        throw std::invalid_argument("reconstruct: --spin disagrees with the sample file (file has spin " +
                                    s.str() + ")");
    const double tau = a.tau ? *a.tau : default_basis_tau(s);
    const HermitianOperator A = reconstruct(q, q.constellation, tau);
    save_operator(A, s, a.out);
    std::cerr << "reconstruct: wrote " << s.dimension() << "x" << s.dimension()
              << " operator (spin " << s.str() << ") to " << a.out << "\n";
    return 0;
}

struct RepairArgs {
    std::string in;
    std::string out;
    double epsilon = 1e-3;
    std::optional<double> tau;
    std::uint64_t seed = 0;
    std::string strategy = "random";
};

int run_repair(const RepairArgs& a) {
    const Constellation M = load_constellation(a.in);
    const double tau = a.tau ? *a.tau : default_basis_tau(M.spin());
    RepairOptions opts;
    if (a.strategy == "random")
        opts.strategy = RepairStrategy::RandomProbe;
    else if (a.strategy == "gradient")
        opts.strategy = RepairStrategy::GradientAscent;
    else
        throw std::invalid_argument("repair: unknown strategy '" + a.strategy + "'");
    auto [repaired, report] = repair(M, a.epsilon, tau, a.seed, opts);
    save_constellation(repaired, a.out);
    std::cout << repair_report_to_json(report).dump(2) << "\n";
    std::cerr << "repair: moved " << report.moved_indices.size() << " spike(s), total displacement "
              << fmt(report.total_displacement) << ", wrote " << a.out << "\n";
    return 0;
}

struct FlowArgs {
    std::string in;
    std::string out;
    int index = 0;
    double dt = 1e-3;
    int steps = 1000;
};

int run_flow(const FlowArgs& a) {
    const Constellation M = load_constellation(a.in);
    const FlowTrajectory T = integrate_flow(M, a.index, M[static_cast<std::size_t>(a.index)],
                                            a.dt, a.steps);
    save_trajectory_csv(T, a.out);
    double max_dh = 0.0, max_drift = 0.0;
    for (const FlowSample& smp : T.samples) {
        max_dh = std::max(max_dh, std::abs(smp.energy - T.samples.front().energy));
        max_drift = std::max(max_drift, smp.norm_drift);
    }
    std::cerr << "flow: " << a.steps << " steps at dt=" << fmt(a.dt) << ", max |H - H0| = "
              << fmt(max_dh) << ", max norm drift = " << fmt(max_drift) << ", wrote " << a.out
              << "\n";
    return 0;
}

struct SweepArgs {
    std::string spins;
    int trials = 200;
    std::uint64_t seed = 0;
    std::optional<double> tau;
    std::optional<std::string> out;
};

int run_sweep(const SweepArgs& a) {
    if (a.trials < 1) throw std::invalid_argument("sweep: --trials must be >= 1");
    std::vector<SpinLabel> spins;
    {
        std::string cur;
        for (char c : a.spins + ",") {
            if (c == ',') {
                if (!cur.empty()) spins.push_back(SpinLabel::parse(cur));
                cur.clear();
            } else if (c != ' ') {
                cur += c;
            }
        }
        if (spins.empty()) throw std::invalid_argument("sweep: --spin list is empty");
    }

    std::string csv = "spin,doubled_spin,trials,pass_fraction,median_log_abs_det,median_condition_number,tau\n";
    for (const SpinLabel s : spins) {
        const double tau = a.tau ? *a.tau : default_basis_tau(s);
        int passed = 0;
        std::vector<double> logdets, conds;
        for (int t = 0; t < a.trials; ++t) {
            const Constellation M =
                random_constellation(s, mix_seed(a.seed, static_cast<std::uint64_t>(s.doubled()),
                                                 static_cast<std::uint64_t>(t)));
            const FrameDiagnostics d = diagnostics(gram(M), tau);
            if (d.is_basis) ++passed;
            logdets.push_back(d.log_abs_det);
            conds.push_back(d.condition_number);
        }
        csv += s.str() + "," + std::to_string(s.doubled()) + "," + std::to_string(a.trials) + "," +
               fmt(static_cast<double>(passed) / a.trials) + "," + fmt(median(logdets)) + "," +
               fmt(median(conds)) + "," + fmt(tau) + "\n";
        std::cerr << "sweep: spin " << s.str() << ": " << passed << "/" << a.trials
                  << " basis at tau " << fmt(tau) << "\n";
    }
    if (a.out)
        spinframe::detail::write_text_file(*a.out, csv);
    else
        std::cout << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherent-state projector bases on spin constellations"};
    app.require_subcommand(1);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "Generate a constellation and write it to a file");
    gen->add_option("--spin", gen_args.spin, "Spin as a fraction, e.g. 1/2, 1, 3/2")->required();
    gen->add_option("--kind", gen_args.kind, "regular | random | fibonacci")
        ->check(CLI::IsMember({"regular", "random", "fibonacci"}));
    gen->add_option("--seed", gen_args.seed, "RNG seed (required for --kind random)");
    gen->add_option("--label", gen_args.label, "Override the stored label");
    gen->add_option("-o,--output", gen_args.out, "Output path (.csv for CSV, else JSON)")->required();

    AnalyzeArgs an_args;
    CLI::App* an = app.add_subcommand("analyze", "Spectral diagnostics of a constellation file");
    an->add_option("-i,--input", an_args.in, "Constellation JSON file")->required();
    an->add_option("--tau", an_args.tau, "Relative spectral threshold (default N_s * eps)");
    an->add_option("-o,--output", an_args.out, "Also write diagnostics JSON here");

    ReconstructArgs rc_args;
    CLI::App* rc = app.add_subcommand("reconstruct",
                                      "Reconstruct a Hermitian operator from Q-symbol samples");
    rc->add_option("-i,--input", rc_args.in, "Q-sample CSV file (n,x,y,z,p_n)")->required();
    rc->add_option("-o,--output", rc_args.out, "Output operator JSON file")->required();
    rc->add_option("--tau", rc_args.tau, "Relative spectral threshold (default N_s * eps)");
    rc->add_option("--spin", rc_args.spin, "Cross-check: expected spin of the sample file");

    RepairArgs rp_args;
    CLI::App* rp = app.add_subcommand("repair", "Perturb a singular constellation into a basis");
    rp->add_option("-i,--input", rp_args.in, "Constellation JSON file")->required();
    rp->add_option("-o,--output", rp_args.out, "Output (repaired) constellation JSON file")->required();
    rp->add_option("--epsilon", rp_args.epsilon, "Total perturbation budget (default 1e-3)");
    rp->add_option("--tau", rp_args.tau, "Relative spectral threshold (default N_s * eps)");
    rp->add_option("--seed", rp_args.seed, "RNG seed")->required();
    rp->add_option("--strategy", rp_args.strategy, "random | gradient")
        ->check(CLI::IsMember({"random", "gradient"}));

    FlowArgs fl_args;
    CLI::App* fl = app.add_subcommand("flow", "Integrate the determinant flow for one spike");
    fl->add_option("-i,--input", fl_args.in, "Constellation JSON file")->required();
    fl->add_option("-o,--output", fl_args.out, "Output trajectory CSV file")->required();
    fl->add_option("--index", fl_args.index, "Active spike index (default 0)");
    fl->add_option("--dt", fl_args.dt, "Time step (default 1e-3)");
    fl->add_option("--steps", fl_args.steps, "Number of RK4 steps (default 1000)");

    SweepArgs sw_args;
    CLI::App* sw = app.add_subcommand("sweep", "Monte-Carlo basis statistics across spins");
    sw->add_option("--spin", sw_args.spins, "Comma-separated spin list, e.g. 1/2,1,3/2,2")->required();
    sw->add_option("--trials", sw_args.trials, "Random constellations per spin (default 200)");
    sw->add_option("--seed", sw_args.seed, "RNG seed")->required();
    sw->add_option("--tau", sw_args.tau, "Relative spectral threshold (default N_s * eps)");
    sw->add_option("-o,--output", sw_args.out, "Output CSV file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (gen->parsed()) return run_gen(gen_args);
        if (an->parsed()) return run_analyze(an_args);
        if (rc->parsed()) return run_reconstruct(rc_args);
        if (rp->parsed()) return run_repair(rp_args);
        if (fl->parsed()) return run_flow(fl_args);
        if (sw->parsed()) return run_sweep(sw_args);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const SingularGramError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RepairFailedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
