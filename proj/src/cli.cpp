#include "pwmix/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "pwmix/acceptance.hpp"
#include "pwmix/closed_forms.hpp"
#include "pwmix/correlation.hpp"
#include "pwmix/errors.hpp"
#include "pwmix/matrix_builder.hpp"
#include "pwmix/spectral.hpp"
#include "pwmix/structure.hpp"
#include "pwmix/worst_case.hpp"

namespace pwmix {

namespace {

using nlohmann::json;

struct Flags {
    std::optional<int> m;
    std::vector<int> ms;   // survey grid
    std::optional<int> n;
    std::vector<int> ns;   // survey grid
    std::string signature;
    std::string perm;
    std::string kind = "A";
    std::string mode = "all";
    std::string strategy;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    int nmax = 20;
    std::string observable = "eigen";
    std::string phi, psi;
    std::uint64_t mc_samples = 100000;
    std::string format = "csv";
    std::string out;
    int workers = 0;
    std::vector<std::string> suites;
};

// Same value in CSV and JSON: round to the 12 printed significant digits.
double printed(double v) { return std::stod(fmt::format("{:.12g}", v)); }
std::string num(double v) { return fmt::format("{:.12g}", v); }

const std::map<std::string, StructuredKind>& structured_kinds() {
    static const std::map<std::string, StructuredKind> kinds{
        {"P", StructuredKind::permutation}, {"Q", StructuredKind::block_permutation},
        {"J", StructuredKind::backwards_identity}, {"C", StructuredKind::circulant},
        {"D", StructuredKind::folded_circulant}, {"tent", StructuredKind::tent_witness},
    };
    return kinds;
}

int require_n(const Flags& f) {
    if (!f.n) throw PreconditionError("--N is required");
    return *f.n;
}

int require_m(const Flags& f) {
    if (!f.m) throw PreconditionError("--m is required");
    return *f.m;
}

SlopeSignature signature_of(const Flags& f) {
    if (f.signature.empty()) throw PreconditionError("--signature is required");
    const SlopeSignature s = SlopeSignature::parse(f.signature);
    if (f.m && *f.m != s.m()) {
        throw PreconditionError(fmt::format("--m {} does not match signature of length {}", *f.m, s.m()));
    }
    return s;
}

IntervalPermutation perm_of(const Flags& f) {
    if (f.perm.empty()) return IntervalPermutation::identity(require_n(f));
    const IntervalPermutation p = IntervalPermutation::parse(f.perm);
    if (f.n && *f.n != p.size()) {
        throw PreconditionError(fmt::format("--N {} does not match permutation of length {}", *f.n, p.size()));
    }
    return p;
}

ComposedMap map_of(const Flags& f) { return ComposedMap(signature_of(f), perm_of(f)); }

IntegerMatrix build_matrix(const Flags& f) {
    if (f.kind == "A") return reduced_markov(map_of(f));
    if (f.kind == "B") return fine_markov(map_of(f));
    if (f.kind == "E") return doubled_matrix(require_m(f), require_n(f));
    const auto it = structured_kinds().find(f.kind);
    if (it == structured_kinds().end()) throw PreconditionError(fmt::format("unknown matrix kind '{}'", f.kind));
    StructuredParams params;
    switch (it->second) {
    case StructuredKind::permutation:
        params.sigma = perm_of(f);
        params.n = params.sigma->size();
        break;
    case StructuredKind::block_permutation:
        params.sigma = perm_of(f);
        params.n = params.sigma->size();
        params.m = require_m(f);
        break;
    case StructuredKind::circulant:
    case StructuredKind::folded_circulant:
        params.m = require_m(f);
        params.n = require_n(f);
        break;
    default:
        params.n = require_n(f);
        break;
    }
    return structured_matrix(it->second, params);
}

Strategy strategy_of(const Flags& f, int n) {
    if (f.strategy.empty()) {
        Strategy s = default_strategy(n);
        if (s.kind == Strategy::Kind::sampled) s.seed = f.seed;
        return s;
    }
    if (f.strategy == "exhaustive") return Strategy::exhaustive();
    if (f.strategy == "sampled") return Strategy::sampled(f.samples, f.seed);
    if (f.strategy == "symmetric_shortcut") return Strategy::symmetric_shortcut();
    throw PreconditionError(fmt::format("unknown strategy '{}'", f.strategy));
}

RateMode mode_of(const Flags& f) {
    if (f.mode == "all") return RateMode::all;
    if (f.mode == "mixing_only") return RateMode::mixing_only;
    throw PreconditionError(fmt::format("unknown mode '{}'", f.mode));
}

SearchOptions options_of(const Flags& f) { return {Execution::parallel, f.workers}; }

json matrix_json(const IntegerMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.order(); ++i) rows.push_back(std::vector<std::int64_t>(m.row(i).begin(), m.row(i).end()));
    const auto c = m.line_sum();
    return {{"n", m.order()}, {"rowsum", c ? json(*c) : json(nullptr)}, {"rows", rows}};
}

int cmd_matrix(const Flags& f, std::ostream& os) {
    const IntegerMatrix m = build_matrix(f);
    if (f.format == "json") {
        os << matrix_json(m).dump(2) << '\n';
    } else {
        write_matrix_csv(os, m);
    }
    return kExitOk;
}

int cmd_spectrum(const Flags& f, std::ostream& os) {
    const IntegerMatrix m = build_matrix(f);
    const Spectrum s = spectrum(m);
    std::optional<double> rowsum;
    if (const auto c = m.line_sum()) rowsum = static_cast<double>(*c);
    if (f.format == "json") {
        json values = json::array();
        for (const auto& v : s.eigenvalues) values.push_back({{"re", printed(v.real())}, {"im", printed(v.imag())}});
        os << json{{"order", s.order},
                   {"rowsum", rowsum ? json(printed(*rowsum)) : json(nullptr)},
                   {"tau", s.has_split() ? json(printed(s.tau)) : json(nullptr)},
                   {"eigenvalues", values}}
                  .dump(2)
           << '\n';
    } else {
        write_spectrum_csv(os, s, rowsum);
    }
    return kExitOk;
}

int cmd_rate(const Flags& f, std::ostream& os) {
    const ComposedMap g = map_of(f);
    const double t = tau(reduced_markov(g));
    const double rate = mixing_rate(g);
    const bool mixing = connectivity(fine_markov(g)).primitive;
    const std::string status = mixing ? "topologically mixing" : "not topologically mixing";
    if (f.format == "json") {
        os << json{{"signature", g.signature().str()}, {"perm", g.perm().str()}, {"N", g.cells()},
                   {"tau_A", printed(t)}, {"rate", printed(rate)}, {"mixing", status}}
                  .dump(2)
           << '\n';
    } else {
        os << "signature,perm,N,tau_A,rate,mixing\n";
        os << fmt::format("{},\"{}\",{},{},{},{}\n", g.signature().str(), g.perm().str(), g.cells(), num(t),
                          num(rate), status);
    }
    return kExitOk;
}

std::optional<double> predicted_rate(const SlopeSignature& s, int n, RateMode mode) {
    if (mode != RateMode::all) return std::nullopt;
    const auto canon = canonical_signatures(s.m());
    if (s == canon.stretch_fold) return sf_worst_rate(s.m(), n);
    if (s == canon.zigzag || s == canon.inverted_zigzag) return zigzag_worst_rate(s.m(), n);
    return std::nullopt;
}

int cmd_worst(const Flags& f, std::ostream& os) {
    const SlopeSignature s = signature_of(f);
    const int n = require_n(f);
    const RateMode mode = mode_of(f);
    const SearchResult r = worst_mixing_rate(s, n, mode, strategy_of(f, n), options_of(f));
    const auto predicted = predicted_rate(s, n, mode);
    if (f.format == "json") {
        os << json{{"m", s.m()}, {"N", n}, {"signature", s.str()}, {"mode", to_string(mode)},
                   {"strategy", r.strategy.str()}, {"value", printed(r.value)}, {"argmax", r.argmax.str()},
                   {"evaluated", r.evaluated}, {"predicted", predicted ? json(printed(*predicted)) : json(nullptr)}}
                  .dump(2)
           << '\n';
    } else {
        os << "m,N,signature,mode,strategy,value,argmax,evaluated,predicted\n";
        os << fmt::format("{},{},{},{},\"{}\",{},\"{}\",{},{}\n", s.m(), n, s.str(), to_string(mode),
                          r.strategy.str(), num(r.value), r.argmax.str(), r.evaluated,
                          predicted ? num(*predicted) : std::string());
    }
    return kExitOk;
}

int cmd_survey(const Flags& f, std::ostream& os) {
    std::vector<int> ms = f.ms;
    if (ms.empty()) ms = {2, 3};
    std::vector<int> ns = f.ns;
    if (ns.empty()) {
        ns.resize(static_cast<std::size_t>(std::max(0, std::min(f.nmax, 7) - 1)));
        std::iota(ns.begin(), ns.end(), 2);
    }
    const RateMode mode = mode_of(f);
    std::vector<SurveyRow> rows;
    for (int m : ms) {
        std::vector<SlopeSignature> sigs;
        if (!f.signature.empty()) {
            const auto s = SlopeSignature::parse(f.signature);
            if (s.m() == m) sigs.push_back(s);
        } else {
            sigs = orbit_representatives(m);
        }
        for (int n : ns) {
            if (n < m) continue;
            for (const auto& s : sigs) {
                try {
                    rows.push_back(survey_point(s, n, mode, strategy_of(f, n), options_of(f)));
                } catch (const DomainError&) {
                    // no mixing composition: nothing to report for this point
                }
            }
        }
    }
    if (f.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"m", r.m}, {"N", r.n}, {"signature", r.signature}, {"mode", to_string(r.mode)},
                           {"strategy", r.result.strategy.str()}, {"value", printed(r.result.value)},
                           {"argmax", r.result.argmax.str()}, {"evaluated", r.result.evaluated},
                           {"wall_ms", std::stod(fmt::format("{:.3f}", r.wall_ms))}});
        }
        os << arr.dump(2) << '\n';
    } else {
        write_survey_header(os);
        for (const auto& r : rows) write_survey_row(os, r);
    }
    return kExitOk;
}

int cmd_region(const Flags& f, std::ostream& os) {
    const int n = require_n(f);
    const RegionTest region(n);  // validates odd N >= 3
    if (n > kMaxExhaustiveCells) {
        throw CapacityError(fmt::format("region enumeration is limited to N <= {}", kMaxExhaustiveCells));
    }
    const SlopeSignature tent = canonical_signatures(2).zigzag;
    const IntegerMatrix a = reduced_markov(ComposedMap(tent, IntervalPermutation::identity(n)));
    const auto scores = scan_all_permutations(a, tent, Execution::parallel, f.workers);
    json arr = json::array();
    if (f.format != "json") os << "N,sigma,re,im,modulus,in_region,active_constraint\n";
    for (std::size_t k = 0; k < scores.tau.size(); ++k) {
        if (!scores.mixing[k]) continue;
        auto images = unrank_permutation(n, k);
        for (int& v : images) ++v;
        const IntervalPermutation sigma(std::move(images));
        const Spectrum s = spectrum(permute_columns(a, sigma));
        for (const Complex& lambda : s.nonleading) {
            const Complex half = lambda / 2.0;
            const auto v = tent_region_contains(half, n);
            if (f.format == "json") {
                arr.push_back({{"N", n}, {"sigma", sigma.str()}, {"re", printed(half.real())},
                               {"im", printed(half.imag())}, {"modulus", printed(std::abs(half))},
                               {"in_region", v.inside}, {"active_constraint", v.active}});
            } else {
                os << fmt::format("{},\"{}\",{},{},{},{},{}\n", n, sigma.str(), num(half.real()), num(half.imag()),
                                  num(std::abs(half)), v.inside ? "true" : "false", v.active);
            }
        }
    }
    if (f.format == "json") os << arr.dump(2) << '\n';
    return kExitOk;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw PreconditionError(fmt::format("bad observable value '{}'", item));
        }
    }
    return v;
}

int cmd_correlate(const Flags& f, std::ostream& os) {
    const ComposedMap g = map_of(f);
    const int n = g.cells();
    std::optional<StepObservable> phi, psi;
    if (!f.phi.empty()) phi = StepObservable(parse_values(f.phi));
    if (!f.psi.empty()) psi = StepObservable(parse_values(f.psi));
    if (!phi || !psi) {
        StepObservable fallback = StepObservable::constant(1, 0.0);
        if (f.observable == "eigen") {
            fallback = subleading_observable(g).observable;
        } else if (f.observable == "indicator") {
            fallback = StepObservable::indicator(n, 1);
        } else if (f.observable == "random") {
            std::mt19937_64 rng(f.seed);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            std::vector<double> v(static_cast<std::size_t>(n));
            for (double& x : v) x = u(rng);
            fallback = StepObservable(std::move(v));
        } else {
            throw PreconditionError(fmt::format("unknown observable '{}'", f.observable));
        }
        if (!phi) phi = fallback;
        if (!psi) psi = fallback;
    }
    if (f.nmax < 0) throw PreconditionError("--nmax must be nonnegative");
    const auto exact = correlation_sequence(g, *phi, *psi, f.nmax);
    std::vector<DecayRow> rows;
    for (int k = 0; k <= f.nmax; ++k) {
        const auto mc = monte_carlo_correlation(g, *phi, *psi, k, f.mc_samples, f.seed, Execution::parallel, f.workers);
        rows.push_back({k, exact[static_cast<std::size_t>(k)], mc.estimate, mc.standard_error});
    }
    const DecayFit fit = fit_decay(exact);
    if (f.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"n", r.n}, {"C_exact", printed(r.exact)}, {"C_mc", printed(r.mc)}, {"mc_se", printed(r.mc_se)}});
        }
        os << json{{"g", g.str()}, {"phi", phi->hash()}, {"psi", psi->hash()},
                   {"fitted_rate", printed(fit.fitted_rate)}, {"mixing_rate", printed(mixing_rate(g))}, {"rows", arr}}
                  .dump(2)
           << '\n';
    } else {
        write_decay_csv(os, g, *phi, *psi, rows);
    }
    return kExitOk;
}

int cmd_verify(const Flags& f, std::ostream& os) {
    std::vector<std::string> suites = f.suites;
    if (suites.empty() || (suites.size() == 1 && suites[0] == "all")) suites = acceptance_suites();
    AcceptanceOptions options;
    options.workers = f.workers;
    bool all_pass = true;
    json arr = json::array();
    for (const auto& name : suites) {
        const CriterionResult r = run_acceptance(name, options);
        all_pass = all_pass && r.pass;
        if (f.format == "json") {
            arr.push_back({{"suite", r.suite}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
        } else {
            os << format_result(r) << '\n' << std::flush;
        }
    }
    if (f.format == "json") os << arr.dump(2) << '\n';
    return all_pass ? kExitOk : kExitVerifyFailed;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mixing rates of piecewise-linear maps composed with interval exchanges", "pwmix"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&f](CLI::App* sub) {
        sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", f.out, "write output to this file");
        sub->add_option("--workers", f.workers, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    };
    auto add_map = [&f](CLI::App* sub) {
        sub->add_option("--m", f.m, "branch count");
        sub->add_option("--N", f.n, "cell count");
        sub->add_option("--signature", f.signature, "slope signs, e.g. +-+");
        sub->add_option("--perm", f.perm, "one-based images, e.g. 2,3,1 (default identity)");
    };
    auto add_search = [&f](CLI::App* sub) {
        sub->add_option("--mode", f.mode, "all or mixing_only");
        sub->add_option("--strategy", f.strategy, "exhaustive, sampled or symmetric_shortcut");
        sub->add_option("--samples", f.samples, "sample count for the sampled strategy");
        sub->add_option("--seed", f.seed, "seed for sampling");
    };

    auto* matrix = app.add_subcommand("matrix", "emit a matrix as CSV");
    add_map(matrix);
    add_common(matrix);
    matrix->add_option("--kind", f.kind, "A, B, P, Q, J, C, D, E or tent");

    auto* spec = app.add_subcommand("spectrum", "emit the eigenvalues of a matrix");
    add_map(spec);
    add_common(spec);
    spec->add_option("--kind", f.kind, "A, B, P, Q, J, C, D, E or tent");

    auto* rate = app.add_subcommand("rate", "mixing rate of sigma o f");
    add_map(rate);
    add_common(rate);

    auto* worst = app.add_subcommand("worst", "worst mixing rate over sigma");
    add_map(worst);
    add_search(worst);
    add_common(worst);

    auto* survey = app.add_subcommand("survey", "worst rates over an (m, N) grid");
    survey->add_option("--m", f.ms, "branch counts (default 2 3)");
    survey->add_option("--N", f.ns, "cell counts (default 2..nmax)");
    survey->add_option("--signature", f.signature, "restrict to one signature");
    survey->add_option("--nmax", f.nmax, "largest N when --N is absent (capped at 7)");
    add_search(survey);
    add_common(survey);

    auto* region = app.add_subcommand("region", "nonleading eigenvalues of mixing sigma o tent, odd N");
    region->add_option("--N", f.n, "odd cell count")->required();
    add_common(region);

    auto* corr = app.add_subcommand("correlate", "exact and sampled correlation decay");
    add_map(corr);
    corr->add_option("--nmax", f.nmax, "largest lag");
    corr->add_option("--samples", f.mc_samples, "Monte Carlo samples per lag");
    corr->add_option("--seed", f.seed, "Monte Carlo seed");
    corr->add_option("--observable", f.observable, "eigen, indicator or random");
    corr->add_option("--phi", f.phi, "comma-separated cell values");
    corr->add_option("--psi", f.psi, "comma-separated cell values");
    add_common(corr);

    auto* verify = app.add_subcommand("verify", "run acceptance suites");
    verify->add_option("suites", f.suites, "suite names or all");
    add_common(verify);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::ofstream file;
    if (!f.out.empty()) {
        file.open(f.out);
        if (!file) {
            err << "error: cannot open " << f.out << '\n';
            return kExitUsage;
        }
    }
    std::ostream& os = f.out.empty() ? out : file;

    try {
        if (*matrix) return cmd_matrix(f, os);
        if (*spec) return cmd_spectrum(f, os);
        if (*rate) return cmd_rate(f, os);
        if (*worst) return cmd_worst(f, os);
        if (*survey) return cmd_survey(f, os);
        if (*region) return cmd_region(f, os);
        if (*corr) return cmd_correlate(f, os);
        if (*verify) return cmd_verify(f, os);
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace pwmix
