#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lacuna/diagnostics.hpp"
#include "lacuna/errors.hpp"
#include "lacuna/io.hpp"
#include "lacuna/norms.hpp"
#include "lacuna/parallel.hpp"
#include "lacuna/relations.hpp"
#include "lacuna/rng.hpp"
#include "lacuna/schedules.hpp"

namespace fs = std::filesystem;
using namespace lacuna;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;
constexpr int kExitOverflow = 3;
constexpr int kExitPartial = 4;

struct Opts {
    std::string schedule = "t2_2";
    double c = 1.0;
    double p = 1.5;
    double tau = 0.1;
    double beta = 0;  // 0 = schedule default
    std::vector<double> table;
    std::string base = "naturals";
    int power = 2;
    std::string block = "dyadic";
    std::int64_t n = 100000;
    std::uint64_t seed = 0;
    std::string out;
    std::string name = "sample";
    int threads = 1;
};

MeanSchedule make_schedule(const Opts& o) {
    if (o.schedule == "t2_2") return MeanSchedule::t2_2(o.c);
    if (o.schedule == "p2_4") return MeanSchedule::p2_4(o.c);
    if (o.schedule == "t2_5") return MeanSchedule::t2_5(o.c, o.p);
    if (o.schedule == "t2_6") return MeanSchedule::t2_6(o.c, o.p);
    if (o.schedule == "t2_7") return MeanSchedule::t2_7(o.c, o.tau);
    if (o.schedule == "t2_10")
        return o.beta > 0 ? MeanSchedule::t2_10(o.c, o.p, o.beta) : MeanSchedule::t2_10(o.c, o.p);
    if (o.schedule == "katz_mall") return MeanSchedule::katz_mall(o.c);
    if (o.schedule == "custom") return MeanSchedule::custom(o.table);
    throw InvalidInput("unknown schedule tag: " + o.schedule);
}

BaseSequence make_base(const Opts& o) {
    if (o.base == "naturals") return BaseSequence::naturals();
    if (o.base == "squares") return BaseSequence::perfect_powers(2);
    if (o.base == "powers") return BaseSequence::perfect_powers(o.power);
    if (o.base == "primes") return BaseSequence::primes();
    throw InvalidInput("unknown base tag: " + o.base);
}

BlockSchedule make_block(const Opts& o) {
    if (o.block == "dyadic") return BlockSchedule::dyadic();
    if (o.block == "n_pow_n") return BlockSchedule::n_pow_n();
    if (o.block == "exp_loglog_sq") return BlockSchedule::exp_loglog_sq();
    if (o.block == "n_pow_beta_n")
        return BlockSchedule::n_pow_beta_n(o.beta > 0 ? o.beta : 2.0);
    throw InvalidInput("unknown block tag: " + o.block);
}

std::string out_dir(const Opts& o) {
    if (!o.out.empty()) return o.out;
    if (const char* env = std::getenv("LACUNA_OUT")) return env;
    return "out";
}

std::vector<std::int64_t> pow2_grid(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> g;
    for (std::int64_t v = lo; v <= hi; v *= 2) g.push_back(v);
    if (g.empty() || g.back() != hi) g.push_back(hi);
    return g;
}

int run_generate(const Opts& o) {
    auto sched = make_schedule(o);
    auto base = make_base(o);
    auto blocks = make_block(o);
    IntegerSet set = sample_set(sched, base, o.n, o.seed);
    fs::create_directories(out_dir(o));

    SetRecord rec{o.name, sched.tag(), o.seed, set};
    std::string set_path = out_dir(o) + "/" + o.name + ".json";
    write_text_file(set_path, to_json(rec) + "\n");

    std::ostringstream summary;
    summary << "N,count,sigma\n";
    for (std::int64_t N : pow2_grid(16, o.n)) {
        summary << N << "," << set.count_in(1, N + 1) << ","
                << format_number(sched.sigma(std::min(N, o.n))) << "\n";
    }
    write_text_file(out_dir(o) + "/" + o.name + "_summary.csv", summary.str());

    std::ostringstream tr;
    tr << "n,lo,hi,count\n";
    for (std::int64_t bn = blocks.first_index();; ++bn) {
        std::int64_t lo, hi;
        try {
            lo = blocks.boundary(bn);
            hi = blocks.boundary(bn + 1);
        } catch (const OverflowError&) {
            break;
        }
        if (lo > set.max() || set.empty()) break;
        tr << bn << "," << lo << "," << hi << "," << set.count_in(lo, hi) << "\n";
    }
    write_text_file(out_dir(o) + "/" + o.name + "_blocks.csv", tr.str());

    std::cout << "wrote " << set_path << ": |set| = " << set.size()
              << ", sigma_N = " << format_number(sched.sigma(o.n)) << "\n";
    return kExitOk;
}

int run_analyze(const Opts& o, const std::string& set_path) {
    SetRecord rec = set_record_from_json(read_text_file(set_path));
    fs::create_directories(out_dir(o));
    std::ostringstream csv;
    csv << "section,key,value\n";
    std::string csv_path = out_dir(o) + "/" + o.name + "_analysis.csv";
    if (rec.elements.empty()) {
        write_text_file(csv_path, csv.str());
        std::cout << "empty set: wrote empty report\n";
        return kExitOk;
    }
    bool partial = false;
    const IntegerSet& set = rec.elements;
    csv << "set,size," << set.size() << "\n";
    csv << "set,max," << set.max() << "\n";

    // dyadic block audit: size and quasi-independence per trace
    auto blocks = make_block(o);
    for (std::int64_t bn = blocks.first_index();; ++bn) {
        std::int64_t lo, hi;
        try {
            lo = blocks.boundary(bn);
            hi = blocks.boundary(bn + 1);
        } catch (const OverflowError&) {
            break;
        }
        if (lo > set.max()) break;
        IntegerSet trace = set.slice(lo, hi);
        std::string status = "skipped(size)";
        if (trace.size() <= 20) {
            switch (is_quasi_independent_checked(trace)) {
                case Ternary::True: status = "quasi-independent"; break;
                case Ternary::False: status = "has-relation"; break;
                case Ternary::Unknown:
                    status = "unknown(budget)";
                    partial = true;
                    break;
            }
        } else {
            partial = true;
        }
        csv << "block," << bn << "," << trace.size() << ";" << status;
        if (!trace.empty() && trace.size() <= 20 && trace.max() <= (std::int64_t{1} << 20))
            csv << ";psi=" << format_number(psi_parameter(trace).value);
        csv << "\n";
    }

    // mesh fit
    if (set.max() >= 8) {
        try {
            auto fit = mesh_exponent_fit(set, pow2_grid(4, set.max()));
            csv << "mesh,beta," << format_number(fit.beta) << "\n";
            csv << "mesh,constant," << format_number(fit.constant) << "\n";
            csv << "mesh,rejected," << (fit.rejected ? "true" : "false") << "\n";
        } catch (const InvalidInput&) {
            csv << "mesh,beta,unavailable\n";
        }
    }

    // Weyl profile on irrational-proxy angles
    auto angles = golden_angles(8);
    auto prof = weyl_profile(set, angles, pow2_grid(16, std::max<std::int64_t>(set.max(), 16)));
    std::vector<PlotSeries> weyl_series;
    for (std::size_t ai = 0; ai < prof.rows.size(); ++ai) {
        const auto& row = prof.rows[ai];
        csv << "weyl,angle" << ai << "," << format_number(std::abs(row.values.back())) << "\n";
        PlotSeries s;
        s.label = "t" + std::to_string(ai);
        for (std::size_t i = 0; i < prof.N_grid.size(); ++i) {
            s.x.push_back(std::log2(static_cast<double>(prof.N_grid[i])));
            s.y.push_back(std::abs(row.values[i]));
        }
        weyl_series.push_back(std::move(s));
    }
    write_text_file(out_dir(o) + "/" + o.name + "_weyl.svg",
                    render_line_plot("|A_N| vs log2 N", weyl_series));

    // Lambda(q) profile
    try {
        std::vector<double> qs = {2, 3, 4, 6, 8};
        auto lam = lambda_q_profile(set, qs, 4, rec.seed);
        PlotSeries s;
        s.label = "C_q";
        for (std::size_t i = 0; i < qs.size(); ++i) {
            csv << "lambda_q," << format_number(qs[i]) << "," << format_number(lam.cq[i]) << "\n";
            s.x.push_back(qs[i]);
            s.y.push_back(lam.cq[i]);
        }
        csv << "lambda_q,exponent," << format_number(lam.fitted_exponent) << "\n";
        write_text_file(out_dir(o) + "/" + o.name + "_cq.svg",
                        render_line_plot("C_q lower bounds", {s}));
    } catch (const ResourceExceeded&) {
        csv << "lambda_q,exponent,unavailable(resource)\n";
        partial = true;
    }

    write_text_file(csv_path, csv.str());
    std::cout << "wrote " << csv_path << (partial ? " (partial)" : "") << "\n";
    return partial ? kExitPartial : kExitOk;
}

struct VerifyOpts {
    std::int64_t N = 100;
    double delta = 0.5;
    double a = 20;
    int s = 3;
    std::int64_t M = 27;
    std::size_t trials = 500;
    std::int64_t horizon = 10000;
    double c29 = 2.0;
    double tau29 = 1.0;
    int n_lo = 8, n_hi = 14;
    std::int64_t grid_N = 10000;
    std::vector<double> qs = {6.0, 8.0};
    double weyl_tol = 0.05;
    std::string ledger;
};

int run_verify(const Opts& o, const VerifyOpts& v, const std::string& bound_id) {
    std::vector<BoundCheckResult> results;
    double c = o.c;
    if (bound_id == "lemma2_1" && c <= 0) {
        c = default_schedule_c();
        std::cout << "schedule constant unset; feasibility default c = " << format_number(c)
                  << "\n";
    }

    if (bound_id == "lemma1_3") {
        results.push_back(check_deviation_bound(std::vector<double>(v.N, v.delta), v.a, v.trials,
                                                o.seed));
    } else if (bound_id == "lemma2_1") {
        results.push_back(check_relation_bound(MeanSchedule::t2_2(c), make_base(o), v.s, v.M,
                                               v.trials, o.seed, v.horizon));
    } else if (bound_id == "lemma3_3") {
        results.push_back(check_relation_bound(MeanSchedule::t2_2(c), make_base(o), v.s, v.M,
                                               v.trials, o.seed, v.horizon, 1000000,
                                               16 * 2.718281828459045));
    } else if (bound_id == "lemma2_9") {
        results = check_dyadic_block_bound(v.c29, v.tau29, v.n_lo, v.n_hi, v.trials, o.seed);
    } else if (bound_id == "lemma3_2") {
        auto sched = MeanSchedule::custom(std::vector<double>(v.grid_N, v.delta));
        results.push_back(
            check_grid_deviation_bound(BaseSequence::naturals(), sched, v.grid_N, v.trials, o.seed));
    } else if (bound_id == "zalcwasser") {
        auto rows = zalcwasser_fit(pow2_grid(64, 2048), v.qs);
        for (const auto& row : rows) {
            BoundCheckResult r;
            r.bound_id = "zalcwasser";
            r.parameters = "q=" + format_number(row.q) + ",N=[64,2048]";
            r.empirical_estimate = row.exponent;
            r.analytic_bound = 1.0 - 2.0 / row.q;
            r.std_error = row.residual;
            r.verdict = std::abs(row.exponent - r.analytic_bound) <= 0.08
                            ? BoundCheckResult::Verdict::Consistent
                            : BoundCheckResult::Verdict::Violated;
            r.note = "fitted growth exponent vs 1 - 2/q";
            results.push_back(std::move(r));
        }
    } else if (bound_id == "weyl") {
        auto sched = make_schedule(o);
        auto base = make_base(o);
        auto angles = golden_angles(20);
        std::size_t pass = 0;
        CounterRng root{o.seed};
        for (std::size_t t = 0; t < v.trials; ++t) {
            IntegerSet set = sample_set(sched, base, o.n, root.derive(t).seed);
            if (set.empty()) continue;
            auto prof = weyl_profile(set, angles, {o.n});
            bool ok = true;
            for (const auto& row : prof.rows)
                if (std::abs(row.values.back()) > v.weyl_tol) ok = false;
            if (ok) ++pass;
        }
        BoundCheckResult r;
        r.bound_id = "weyl";
        r.parameters = "schedule=" + sched.tag() + ",base=" + base.tag() +
                       ",horizon=" + std::to_string(o.n) + ",tol=" + format_number(v.weyl_tol);
        r.trials = v.trials;
        r.empirical_estimate = static_cast<double>(pass) / static_cast<double>(v.trials);
        r.analytic_bound = 0.95;  // target pass rate
        r.std_error = std::sqrt(r.empirical_estimate * (1 - r.empirical_estimate) /
                                static_cast<double>(v.trials));
        r.verdict = r.empirical_estimate >= 0.95 ? BoundCheckResult::Verdict::Consistent
                                                 : BoundCheckResult::Verdict::Violated;
        r.note = "fraction of seeds with all |A_N| <= tol at the horizon";
        results.push_back(std::move(r));
    } else {
        std::cerr << "unknown bound id: " << bound_id << "\n";
        return kExitUsage;
    }

    std::string ledger = v.ledger.empty() ? out_dir(o) + "/ledger.csv" : v.ledger;
    fs::create_directories(fs::path(ledger).parent_path().empty()
                               ? "."
                               : fs::path(ledger).parent_path().string());
    append_ledger(ledger, results, o.seed);

    bool violated = false;
    for (const auto& r : results) {
        std::cout << r.bound_id << " [" << r.parameters << "]: " << to_string(r.verdict)
                  << " (empirical=" << format_number(r.empirical_estimate)
                  << ", analytic=" << format_number(r.analytic_bound) << ")";
        if (!r.note.empty()) std::cout << " -- " << r.note;
        std::cout << "\n";
        if (r.verdict == BoundCheckResult::Verdict::Violated) violated = true;
    }
    return violated ? kExitViolated : kExitOk;
}

int run_report(const Opts& o, const std::string& ledger_path) {
    std::size_t skipped = 0;
    auto rows = read_ledger(ledger_path, &skipped);
    if (skipped > 0) std::cerr << "warning: skipped " << skipped << " malformed ledger rows\n";
    if (rows.empty()) {
        std::cerr << "empty ledger: " << ledger_path << "\n";
        return kExitUsage;
    }
    fs::create_directories(out_dir(o));

    std::vector<std::string> ids;
    for (const auto& r : rows)
        if (std::find(ids.begin(), ids.end(), r.bound_id) == ids.end()) ids.push_back(r.bound_id);

    std::ostringstream index;
    index << "<html><body><h1>bound ledger</h1><ul>\n";
    for (const auto& id : ids) {
        std::vector<std::string> labels;
        std::vector<double> emp, ana;
        for (const auto& r : rows)
            if (r.bound_id == id) {
                labels.push_back(r.params_hash.substr(0, 6));
                emp.push_back(r.empirical);
                ana.push_back(std::isfinite(r.analytic) ? r.analytic : 0.0);
            }
        std::string file = "bound_" + id + ".svg";
        write_text_file(out_dir(o) + "/" + file,
                        render_bar_plot(id + ": empirical (blue) vs analytic (red)", labels, emp,
                                        ana));
        index << "<li><a href=\"" << file << "\">" << id << "</a> (" << labels.size()
              << " rows)</li>\n";
    }
    index << "</ul></body></html>\n";
    write_text_file(out_dir(o) + "/index.html", index.str());
    std::cout << "wrote " << ids.size() << " plots to " << out_dir(o) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random thin integer sets: generation, analysis, bound verification"};
    app.set_config("--config", "", "TOML run configuration");
    app.require_subcommand(1);

    Opts o;
    VerifyOpts v;
    std::string set_path, bound_id, ledger_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--schedule", o.schedule,
                        "t2_2|p2_4|t2_5|t2_6|t2_7|t2_10|katz_mall|custom");
        cmd->add_option("--c", o.c, "schedule constant");
        cmd->add_option("--p", o.p, "exponent p in (1,2)");
        cmd->add_option("--tau", o.tau, "second-stage mean");
        cmd->add_option("--beta", o.beta, "block exponent");
        cmd->add_option("--table", o.table, "custom schedule means");
        cmd->add_option("--base", o.base, "naturals|squares|powers|primes");
        cmd->add_option("--power", o.power, "exponent for the powers base");
        cmd->add_option("--block", o.block, "dyadic|n_pow_n|exp_loglog_sq|n_pow_beta_n");
        cmd->add_option("--n", o.n, "horizon (number of base indices)");
        cmd->add_option("--seed", o.seed, "root seed");
        cmd->add_option("--out", o.out, "output directory (default $LACUNA_OUT or ./out)");
        cmd->add_option("--name", o.name, "artifact name");
        cmd->add_option("--threads", o.threads, "worker cap (outputs identical for any value)");
    };

    auto* gen = app.add_subcommand("generate", "sample a selector set and write it as JSON");
    add_common(gen);

    auto* ana = app.add_subcommand("analyze", "audit blocks, mesh, Weyl and Lambda(q) profiles");
    add_common(ana);
    ana->add_option("--set", set_path, "set JSON file")->required();

    auto* ver = app.add_subcommand("verify", "run a named bound check and append to the ledger");
    add_common(ver);
    ver->add_option("bound", bound_id,
                    "lemma1_3|lemma2_1|lemma2_9|lemma3_2|lemma3_3|zalcwasser|weyl")
        ->required();
    ver->add_option("--N", v.N, "sample size for the deviation check");
    ver->add_option("--delta", v.delta, "constant mean");
    ver->add_option("--a", v.a, "deviation threshold");
    ver->add_option("--s", v.s, "relation length");
    ver->add_option("--M", v.M, "tail cutoff");
    ver->add_option("--trials", v.trials, "Monte Carlo trials");
    ver->add_option("--horizon", v.horizon, "sampling horizon for relation checks");
    ver->add_option("--c29", v.c29, "block-schedule constant (lemma2_9)");
    ver->add_option("--tau29", v.tau29, "second-stage mean (lemma2_9)");
    ver->add_option("--n-lo", v.n_lo, "first dyadic block");
    ver->add_option("--n-hi", v.n_hi, "last dyadic block");
    ver->add_option("--grid-N", v.grid_N, "horizon for the grid deviation check");
    ver->add_option("--q", v.qs, "q values for the quadratic-sum fit");
    ver->add_option("--weyl-tol", v.weyl_tol, "equidistribution tolerance");
    ver->add_option("--ledger", v.ledger, "ledger CSV path");

    auto* rep = app.add_subcommand("report", "render ledger rows as SVG plots");
    add_common(rep);
    rep->add_option("--ledger", ledger_path, "ledger CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    set_worker_count(o.threads);
    try {
        if (gen->parsed()) return run_generate(o);
        if (ana->parsed()) return run_analyze(o, set_path);
        if (ver->parsed()) return run_verify(o, v, bound_id);
        if (rep->parsed()) return run_report(o, ledger_path);
    } catch (const OverflowError& e) {
        std::cerr << "overflow: " << e.what() << "\n";
        return kExitOverflow;
    } catch (const ResourceExceeded& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitPartial;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
