// Command-line front end: sampling-plan tables, risk-curve datasets,
// ad-hoc conformity reports, prior elicitation, and oracle verification.
//
// Exit codes: 0 success, 2 usage error, 3 domain error, 4 verification
// failure.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qconform/qconform.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_domain = 3;
constexpr int exit_verification = 4;

std::string fmt(double value) {
    std::ostringstream os;
    os << std::setprecision(12) << value;
    return os.str();
}

qconform::BetaParams resolve_prior(const std::string& prior_spec,
                                   int preset_index) {
    if (!prior_spec.empty() && preset_index != 0) {
        throw CLI::ValidationError("--prior and --preset are mutually exclusive");
    }
    if (preset_index != 0) {
        const auto& preset = qconform::preset_by_index(preset_index);
        return {preset.a, preset.b};
    }
    if (!prior_spec.empty()) {
        const auto comma = prior_spec.find(',');
        if (comma == std::string::npos) {
            throw CLI::ValidationError("--prior expects the form a,b");
        }
        try {
            const double a = std::stod(prior_spec.substr(0, comma));
            const double b = std::stod(prior_spec.substr(comma + 1));
            return {a, b};
        } catch (const std::invalid_argument&) {
            throw CLI::ValidationError("--prior expects numeric a,b");
        }
    }
    return {1.0, 1.0};
}

void check_lot_size(long lot_size) {
    if (lot_size != qconform::supported_lot_size) {
        throw std::domain_error(
            "unsupported lot size " + std::to_string(lot_size) +
            " (the embedded plan table covers lot size 1200 only)");
    }
}

// Stream sink: stdout by default, file when --out is given.
class OutputSink {
  public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw std::domain_error("cannot open output file: " + path);
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

struct CurveRow {
    int plan_index;
    double aql_percent;
    long n;
    long c;
    long x_c;
    double p_conform_y0;
    double r_con_at_c;
    double r_pro_at_c_plus_1;
    double r_con_global;
    double r_pro_global;
};

CurveRow compute_curve_row(const qconform::BetaParams& prior, long lot_size,
                           const qconform::SamplingPlan& plan,
                           std::optional<long> y_override) {
    const long x_c = qconform::tolerance_limit(plan.aql, lot_size);
    const long y0 = y_override.value_or(0);
    const long y_con = y_override.value_or(plan.c);
    const long y_pro = std::min(y_override.value_or(plan.c) + 1, plan.n);
    CurveRow row{};
    row.plan_index = plan.index;
    row.aql_percent = plan.aql.percent();
    row.n = plan.n;
    row.c = plan.c;
    row.x_c = x_c;
    row.p_conform_y0 =
        qconform::lot_conformance_prob(prior, lot_size, plan.n, y0, x_c);
    row.r_con_at_c = 1.0 - qconform::lot_conformance_prob(prior, lot_size,
                                                          plan.n, y_con, x_c);
    row.r_pro_at_c_plus_1 =
        qconform::lot_conformance_prob(prior, lot_size, plan.n, y_pro, x_c);
    const auto global =
        qconform::lot_global_risks(prior, lot_size, plan.n, plan.c, x_c);
    row.r_con_global = global.consumer;
    row.r_pro_global = global.producer;
    return row;
}

void print_report(std::ostream& os, const qconform::ConformityReport& report,
                  const std::string& format) {
    if (format == "csv") {
        os << "p_conform_given_y,specific_consumer_risk,specific_producer_risk,"
              "global_consumer_risk,global_producer_risk,accept_prob,"
              "prior_conform_prob,identity_residual\n";
        os << fmt(report.p_conform_given_y) << ','
           << (report.specific_consumer_risk
                   ? fmt(*report.specific_consumer_risk)
                   : std::string())
           << ','
           << (report.specific_producer_risk
                   ? fmt(*report.specific_producer_risk)
                   : std::string())
           << ',' << fmt(report.global_consumer_risk) << ','
           << fmt(report.global_producer_risk) << ','
           << fmt(report.accept_prob) << ',' << fmt(report.prior_conform_prob)
           << ',' << fmt(report.identity_residual) << '\n';
        return;
    }
    os << "p_conform_given_y     " << fmt(report.p_conform_given_y) << '\n';
    if (report.specific_consumer_risk) {
        os << "specific_consumer_risk " << fmt(*report.specific_consumer_risk)
           << "  (sample accepts: y <= c)\n";
    }
    if (report.specific_producer_risk) {
        os << "specific_producer_risk " << fmt(*report.specific_producer_risk)
           << "  (sample rejects: y >= c+1)\n";
    }
    os << "global_consumer_risk  " << fmt(report.global_consumer_risk) << '\n'
       << "global_producer_risk  " << fmt(report.global_producer_risk) << '\n'
       << "accept_prob           " << fmt(report.accept_prob) << '\n'
       << "prior_conform_prob    " << fmt(report.prior_conform_prob) << '\n'
       << "identity_residual     " << fmt(report.identity_residual) << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian conformity assessment of lots and processes under "
                 "attributes sampling"};
    app.require_subcommand(1);
    app.set_config("--config")->description(
        "key=value config file (lot-size, prior, preset); flags override");

    std::string prior_spec;
    int preset_index = 0;
    long lot_size = qconform::supported_lot_size;
    std::string out_path;
    std::string format = "text";
    app.add_option("--prior", prior_spec, "beta prior as a,b")->capture_default_str();
    app.add_option("--preset", preset_index,
                   "built-in preset prior row (1..8)")
        ->check(CLI::Range(1, 8));
    app.add_option("--lot-size", lot_size, "lot size N")->capture_default_str();
    app.add_option("--out", out_path, "write output to file instead of stdout");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "text"}));

    // plans -----------------------------------------------------------------
    auto* cmd_plans =
        app.add_subcommand("plans", "list the embedded single sampling plans");

    // curves ----------------------------------------------------------------
    auto* cmd_curves = app.add_subcommand(
        "curves", "emit the per-plan risk-curve dataset as CSV");
    std::optional<long> curves_y;
    bool sweep_priors = false;
    cmd_curves->add_option("--y", curves_y,
                           "condition specific risks on y (default: y=c and "
                           "y=c+1 at the acceptance margin)");
    cmd_curves->add_flag("--sweep-priors", sweep_priors,
                         "emit one row block per builtin preset prior");

    // risk ------------------------------------------------------------------
    auto* cmd_risk =
        app.add_subcommand("risk", "evaluate one conformity scenario");
    long risk_n = 0;
    long risk_c = 0;
    long risk_y = 0;
    double risk_xc = 0.0;
    bool risk_process = false;
    cmd_risk->add_option("--n", risk_n, "sample size")->required();
    cmd_risk->add_option("--c", risk_c, "acceptance number")->required();
    cmd_risk->add_option("--y", risk_y, "observed nonconforming units")
        ->required();
    cmd_risk
        ->add_option("--xc", risk_xc,
                     "upper tolerance limit (count for lots, proportion with "
                     "--process)")
        ->required();
    cmd_risk->add_flag("--process", risk_process,
                       "assess the process proportion instead of a lot");

    // elicit ----------------------------------------------------------------
    auto* cmd_elicit =
        app.add_subcommand("elicit", "fit beta prior parameters from summaries");
    std::optional<double> el_mean, el_quantile, el_level, el_fixed_a;
    cmd_elicit->add_option("--mean", el_mean, "prior mean");
    cmd_elicit->add_option("--quantile", el_quantile, "quantile value p_rho");
    cmd_elicit->add_option("--level", el_level, "quantile level rho");
    cmd_elicit->add_option("--fixed-a", el_fixed_a, "fix the first shape a");

    // verify ----------------------------------------------------------------
    auto* cmd_verify = app.add_subcommand(
        "verify", "check analytic risks against an independent oracle");
    long ver_n = 0;
    long ver_c = 0;
    long ver_xc_count = 0;
    double ver_xc_prop = 0.0;
    bool ver_process = false;
    long ver_trials = 0;
    std::uint64_t ver_seed = 20240817ULL;
    std::optional<double> expect_rcon, expect_rpro;
    cmd_verify->add_option("--n", ver_n, "sample size")->required();
    cmd_verify->add_option("--c", ver_c, "acceptance number")->required();
    cmd_verify->add_option("--xc", ver_xc_count, "lot tolerance limit (count)");
    cmd_verify->add_option("--xc-prop", ver_xc_prop,
                           "process tolerance limit (proportion)");
    cmd_verify->add_flag("--process", ver_process, "verify the process path");
    cmd_verify->add_option(
        "--trials", ver_trials,
        "Monte Carlo trials (default: exact enumeration for lots with N <= 20)");
    cmd_verify->add_option("--seed", ver_seed, "PRNG seed (SplitMix64)")
        ->capture_default_str();
    cmd_verify->add_option("--expect-rcon", expect_rcon,
                           "check the oracle against this consumer risk "
                           "instead of the analytic value");
    cmd_verify->add_option("--expect-rpro", expect_rpro,
                           "check the oracle against this producer risk "
                           "instead of the analytic value");

    // Shared options (--prior, --preset, --lot-size, ...) live on the parent
    // but may be given after the subcommand name.
    for (CLI::App* sub : {cmd_plans, cmd_curves, cmd_risk, cmd_elicit, cmd_verify}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        const qconform::BetaParams prior = resolve_prior(prior_spec, preset_index);
        OutputSink sink(out_path);
        std::ostream& os = sink.stream();

        if (*cmd_plans) {
            check_lot_size(lot_size);
            if (format == "csv") {
                os << "index,aql,x_C,n,c\n";
                for (const auto& plan : qconform::plan_table()) {
                    os << plan.index << ',' << fmt(plan.aql.percent()) << ','
                       << qconform::tolerance_limit(plan.aql, lot_size) << ','
                       << plan.n << ',' << plan.c << '\n';
                }
            } else {
                os << "index   AQL%    x_C     n     c\n";
                for (const auto& plan : qconform::plan_table()) {
                    os << std::setw(5) << plan.index << std::setw(9)
                       << plan.aql.percent() << std::setw(7)
                       << qconform::tolerance_limit(plan.aql, lot_size)
                       << std::setw(6) << plan.n << std::setw(6) << plan.c
                       << '\n';
                }
            }
            return exit_ok;
        }

        if (*cmd_curves) {
            check_lot_size(lot_size);
            const std::string data_header =
                "plan_index,aql_percent,n,c,x_C,p_conform_y0,r_con_at_c,"
                "r_pro_at_c_plus_1,r_con_global,r_pro_global";
            auto emit_row = [&](const CurveRow& row, const std::string& prefix) {
                os << prefix << row.plan_index << ',' << fmt(row.aql_percent)
                   << ',' << row.n << ',' << row.c << ',' << row.x_c << ','
                   << fmt(row.p_conform_y0) << ',' << fmt(row.r_con_at_c) << ','
                   << fmt(row.r_pro_at_c_plus_1) << ',' << fmt(row.r_con_global)
                   << ',' << fmt(row.r_pro_global) << '\n';
            };
            if (sweep_priors) {
                os << "# sweep over the 8 built-in preset priors\n";
                os << "prior_a,prior_b," << data_header << '\n';
                for (const auto& preset : qconform::preset_table()) {
                    const qconform::BetaParams p{preset.a, preset.b};
                    for (const auto& plan : qconform::plan_table()) {
                        emit_row(compute_curve_row(p, lot_size, plan, curves_y),
                                 fmt(preset.a) + ',' + fmt(preset.b) + ',');
                    }
                }
            } else {
                os << data_header << '\n';
                for (const auto& plan : qconform::plan_table()) {
                    emit_row(compute_curve_row(prior, lot_size, plan, curves_y),
                             "");
                }
            }
            return exit_ok;
        }

        if (*cmd_risk) {
            qconform::ConformityReport report =
                risk_process
                    ? qconform::assess_process(prior, risk_n, risk_y, risk_c,
                                               risk_xc)
                    : qconform::assess_lot(
                          prior, lot_size, risk_n, risk_y, risk_c,
                          static_cast<long>(std::llround(risk_xc)));
            print_report(os, report, format);
            return exit_ok;
        }

        if (*cmd_elicit) {
            qconform::ElicitationSpec spec;
            spec.mean = el_mean;
            spec.quantile_value = el_quantile;
            spec.quantile_level = el_level;
            spec.fixed_a = el_fixed_a;
            const qconform::BetaParams fit = qconform::elicit(spec);
            os << "a " << fmt(fit.a) << '\n' << "b " << fmt(fit.b) << '\n';
            os << "fitted_mean " << fmt(fit.mean()) << '\n';
            if (el_quantile && el_level) {
                os << "fitted_cdf_at_quantile "
                   << fmt(qconform::beta_cdf(fit, *el_quantile)) << '\n';
            }
            return exit_ok;
        }

        if (*cmd_verify) {
            bool ok = true;
            auto check_line = [&](const std::string& name, double analytic,
                                  double oracle, double tol,
                                  const std::string& status_note) {
                const bool pass = std::fabs(analytic - oracle) <= tol;
                ok = ok && pass;
                os << name << " analytic=" << fmt(analytic)
                   << " oracle=" << fmt(oracle) << ' ' << status_note
                   << (pass ? " MATCH" : " MISMATCH") << '\n';
            };
            if (ver_process) {
                const auto analytic =
                    qconform::process_global_risks(prior, ver_n, ver_c, ver_xc_prop);
                if (ver_trials < 1) {
                    throw std::domain_error(
                        "verify --process requires --trials (no exact "
                        "enumeration for the process path)");
                }
                const auto mc = qconform::mc_process_risks(
                    prior, ver_n, ver_c, ver_xc_prop,
                    {ver_trials, ver_seed});
                os << "mode MC trials=" << ver_trials << " seed=" << ver_seed
                   << '\n';
                check_line("R_Con", expect_rcon.value_or(analytic.consumer),
                           mc.consumer.estimate, 4.0 * mc.consumer.std_error,
                           "se=" + fmt(mc.consumer.std_error));
                check_line("R_Pro", expect_rpro.value_or(analytic.producer),
                           mc.producer.estimate, 4.0 * mc.producer.std_error,
                           "se=" + fmt(mc.producer.std_error));
            } else {
                const auto analytic = qconform::lot_global_risks(
                    prior, lot_size, ver_n, ver_c, ver_xc_count);
                if (ver_trials < 1 && lot_size <= 20) {
                    const auto exact = qconform::brute_force_lot_risks(
                        prior, lot_size, ver_n, ver_c, ver_xc_count);
                    os << "mode EXACT (bivariate enumeration)\n";
                    check_line("R_Con", expect_rcon.value_or(analytic.consumer),
                               exact.r_con, 1e-10, "tol=1e-10");
                    check_line("R_Pro", expect_rpro.value_or(analytic.producer),
                               exact.r_pro, 1e-10, "tol=1e-10");
                    if (ok) os << "EXACT MATCH\n";
                } else {
                    if (ver_trials < 1) {
                        throw std::domain_error(
                            "verify: lots with N > 20 require --trials");
                    }
                    const auto mc = qconform::mc_lot_risks(
                        prior, lot_size, ver_n, ver_c, ver_xc_count,
                        {ver_trials, ver_seed});
                    os << "mode MC trials=" << ver_trials << " seed=" << ver_seed
                       << '\n';
                    check_line("R_Con", expect_rcon.value_or(analytic.consumer),
                               mc.consumer.estimate, 4.0 * mc.consumer.std_error,
                               "se=" + fmt(mc.consumer.std_error));
                    check_line("R_Pro", expect_rpro.value_or(analytic.producer),
                               mc.producer.estimate, 4.0 * mc.producer.std_error,
                               "se=" + fmt(mc.producer.std_error));
                }
            }
            return ok ? exit_ok : exit_verification;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const qconform::ElicitationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_domain;
    }
    return exit_ok;
}
