#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "impob/criteria.hpp"
#include "impob/descriptor.hpp"
#include "impob/errors.hpp"
#include "impob/float_rank.hpp"
#include "impob/frequency.hpp"
#include "impob/json_io.hpp"
#include "impob/matrix.hpp"
#include "impob/weierstrass.hpp"

namespace impob::selftest {

struct Options {
    std::uint64_t seed = 0x5eed0b5e44f2a9e1ull;
    std::size_t trials = 500;
    std::size_t max_n = 5;
    long entry_range = 5;
    bool inject_failure = false;
};

struct SuiteStats {
    std::string name;
    std::size_t cases = 0;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string first_failure;
    std::optional<json> counterexample;

    bool passed() const { return failures == 0; }
};

struct FloatAgreement {
    std::size_t total = 0;
    std::size_t agree = 0;

    double ratio() const { return total == 0 ? 1.0 : static_cast<double>(agree) / total; }
};

// Two-state shift pencil E = [[0,1],[0,0]], A = I. The impulsive mode shows
// up on the first state: reading x1 makes the system impulse observable,
// reading x2 does not.
inline DescriptorSystem sample_n2(bool output_on_x1) {
    const RationalMatrix e = RationalMatrix::from_rows({{0, 1}, {0, 0}});
    const RationalMatrix a = RationalMatrix::identity(2);
    const RationalMatrix c = output_on_x1 ? RationalMatrix::from_rows({{1, 0}})
                                          : RationalMatrix::from_rows({{0, 1}});
    return DescriptorSystem::validate(e, a, c);
}

// Three-state shift pencil with output on x3; hides an order-1 impulse.
inline DescriptorSystem sample_n3() {
    const RationalMatrix e = RationalMatrix::from_rows({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
    return DescriptorSystem::validate(e, RationalMatrix::identity(3),
                                      RationalMatrix::from_rows({{0, 0, 1}}));
}

inline json describe_counterexample(const DescriptorSystem& sys, const std::string& suite,
                                    const std::string& detail) {
    json j = system_file_to_json({"counterexample", sys.E(), sys.A(), sys.C()});
    j["suite"] = suite;
    j["detail"] = detail;
    return j;
}

inline void record_failure(SuiteStats& st, const DescriptorSystem& sys, const std::string& what) {
    ++st.failures;
    if (st.failures == 1) {
        st.first_failure = what;
        st.counterexample = describe_counterexample(sys, st.name, what);
    }
}

// Random system with a regular pencil. Entries stay within [-range, range];
// half the draws get 1..n rows of E zeroed so rank-deficient E (the
// interesting regime) occurs often. Irregular draws are rejected.
inline DescriptorSystem draw_system(std::mt19937_64& rng, std::size_t max_n, long range) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng() % max_n);
        const std::size_t m =
            rng() % 8 == 0 ? 0 : 1 + static_cast<std::size_t>(rng() % 3);
        RationalMatrix e(n, n), a(n, n), c(m, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                e(i, j) = impob::detail::bounded_draw(rng, range);
                a(i, j) = impob::detail::bounded_draw(rng, range);
            }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                c(i, j) = impob::detail::bounded_draw(rng, range);
        if (rng() % 2 == 0) {
            const std::size_t zeroed = 1 + static_cast<std::size_t>(rng() % n);
            for (std::size_t z = 0; z < zeroed; ++z) {
                const std::size_t row = static_cast<std::size_t>(rng() % n);
                for (std::size_t j = 0; j < n; ++j)
                    e(row, j) = 0;
            }
        }
        try {
            return DescriptorSystem::validate(std::move(e), std::move(a), std::move(c));
        } catch (const irregular_pencil&) {
        }
    }
    throw internal_defect("draw_system: no regular pencil after 1000 attempts");
}

inline WeierstrassData draw_canonical(std::mt19937_64& rng, std::size_t max_n, long bound) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % max_n);
    const std::size_t n2 = static_cast<std::size_t>(rng() % (n + 1));
    const std::size_t m = rng() % 8 == 0 ? 0 : 1 + static_cast<std::size_t>(rng() % 3);
    WeierstrassData wd = random_canonical(rng(), n - n2, n2, m, bound);
    // A fully random C2 almost never misses a nilpotent chain, which would
    // leave the unobservable branch of every suite starved. N is strictly
    // upper triangular, so its chains drain into the low-index states;
    // hiding a prefix of columns half the time buries whole chain tails and
    // yields unobservable impulses of all orders at useful rates.
    if (n2 > 0 && rng() % 2 == 0) {
        const std::size_t hidden = 1 + static_cast<std::size_t>(rng() % n2);
        for (std::size_t col = 0; col < hidden; ++col)
            for (std::size_t i = 0; i < m; ++i)
                wd.C2(i, col) = 0;
    }
    return wd;
}

// The per-order rank checks must give one answer: agreement across
// r = 0..n-1 on every drawn system. Doubles as the data source for the
// float-vs-exact tally, comparing on the same block matrices.
inline SuiteStats suite_order_equivalence(const Options& opt, FloatAgreement* fl) {
    SuiteStats st;
    st.name = "order-equivalence";
    std::mt19937_64 rng(opt.seed ^ 0xa1ull);
    for (std::size_t t = 0; t < opt.trials; ++t) {
        const DescriptorSystem sys = draw_system(rng, opt.max_n, opt.entry_range);
        ++st.cases;
        std::vector<OrderCheck> rows;
        for (std::size_t r = 0; r < sys.n(); ++r) {
            rows.push_back(check_order_r(sys, r));
            ++st.checks;
            if (fl) {
                ++fl->total;
                if (float_rank(build_obs_matrix(sys, r + 2).matrix) == rows.back().rank_found)
                    ++fl->agree;
            }
        }
        for (const OrderCheck& row : rows)
            if (row.holds != rows.front().holds) {
                record_failure(st, sys,
                               "order checks disagree: r=0 says " +
                                   std::string(rows.front().holds ? "holds" : "fails") +
                                   ", r=" + std::to_string(row.r) + " says the opposite");
                break;
            }
    }
    return st;
}

// Assembled original-coordinates systems versus the fast condition computed
// straight from canonical data, plus the reduced-form rank identity.
inline std::pair<SuiteStats, SuiteStats> suite_canonical_cross_validation(const Options& opt) {
    SuiteStats agree;
    agree.name = "canonical-cross-validation";
    SuiteStats identity;
    identity.name = "reduced-form-identity";
    std::mt19937_64 rng(opt.seed ^ 0xb2ull);
    const std::size_t trials = 2 * opt.trials / 5;
    for (std::size_t t = 0; t < trials; ++t) {
        const WeierstrassData wd = draw_canonical(rng, opt.max_n + 1, 3);
        const DescriptorSystem sys = assemble(wd);
        const DescriptorSystem fast_sys = DescriptorSystem::validate(
            wd.N, RationalMatrix::identity(wd.n2), wd.C2);
        ++agree.cases;
        ++identity.cases;
        for (std::size_t r = 0; r < sys.n(); ++r) {
            ++agree.checks;
            const OrderCheck oc = check_order_r(sys, r);
            if (oc.holds != fast_rank_condition(wd, r))
                record_failure(agree, sys,
                               "criterion and fast condition disagree at r=" + std::to_string(r));
            ++identity.checks;
            const std::size_t lhs = rank(build_obs_matrix(fast_sys, r + 2).matrix);
            if (lhs != reduced_form_rank(wd, r))
                record_failure(identity, sys,
                               "reduced-form rank identity fails at r=" + std::to_string(r) +
                                   ": block rank " + std::to_string(lhs) + " vs formula " +
                                   std::to_string(reduced_form_rank(wd, r)));
        }
    }
    return {std::move(agree), std::move(identity)};
}

// Negative verdicts must come with a verifying witness; positive verdicts
// must leave the kernel search empty for every r up to and including n.
inline SuiteStats suite_witness_soundness(const Options& opt) {
    SuiteStats st;
    st.name = "witness-soundness";
    std::mt19937_64 rng(opt.seed ^ 0xc3ull);
    const std::size_t trials = 2 * opt.trials / 5;
    for (std::size_t t = 0; t < trials; ++t) {
        const DescriptorSystem sys = t % 2 == 0
                                         ? draw_system(rng, opt.max_n, opt.entry_range)
                                         : assemble(draw_canonical(rng, opt.max_n, 3));
        ++st.cases;
        const ObservabilityReport report = is_impulse_observable(sys, Strategy::all_orders());
        if (!report.verdict) {
            ++st.checks;
            if (!report.witness) {
                record_failure(st, sys, "negative verdict without witness");
                continue;
            }
            if (!verify_witness(sys, *report.witness))
                record_failure(st, sys, "attached witness fails verification");
            if (report.witness->order() != 0)
                record_failure(st, sys, "witness at minimal failing r=0 should trim to order 0");
        } else {
            for (std::size_t r = 0; r <= sys.n(); ++r) {
                ++st.checks;
                if (find_witness(sys, r))
                    record_failure(st, sys,
                                   "observable system produced a witness at r=" +
                                       std::to_string(r));
            }
        }
    }
    return st;
}

// Every extracted witness of order >= 1 collapses to a verified order-0
// witness whose top coefficient sits in ker E.
inline SuiteStats suite_order_reduction(const Options& opt) {
    SuiteStats st;
    st.name = "order-reduction";
    std::mt19937_64 rng(opt.seed ^ 0xd4ull);
    const std::size_t trials = 2 * opt.trials / 5;
    std::vector<DescriptorSystem> systems;
    if (opt.trials > 0)
        systems.push_back(sample_n3());
    for (std::size_t t = 0; t < trials; ++t)
        systems.push_back(t % 2 == 0 ? draw_system(rng, opt.max_n, opt.entry_range)
                                     : assemble(draw_canonical(rng, opt.max_n, 3)));
    for (const DescriptorSystem& sys : systems) {
        const std::optional<ImpulseWitness> w = find_witness(sys, sys.n() > 0 ? sys.n() - 1 : 0);
        if (!w || w->order() == 0)
            continue;
        ++st.cases;
        ++st.checks;
        try {
            const ImpulseWitness reduced = order_reduce(sys, *w);
            if (reduced.order() != 0)
                record_failure(st, sys, "reduction did not reach order 0");
            else if (!verify_witness(sys, reduced))
                record_failure(st, sys, "reduced witness fails verification");
            else if (!vector_is_zero(sys.E().apply(w->coeff(w->order()))))
                record_failure(st, sys, "top coefficient escapes ker E");
        } catch (const invalid_witness& e) {
            record_failure(st, sys, std::string("order_reduce rejected a found witness: ") + e.what());
        }
    }
    return st;
}

namespace detail_suite {

// Checks the defining identity (sE - A) X(s) = E w after clearing the common
// denominator, entirely in polynomial arithmetic.
inline bool frequency_residual_holds(const DescriptorSystem& sys, const FrequencySolution& sol) {
    const PolynomialMatrix p = PolynomialMatrix::pencil(sys.E(), sys.A());
    PolynomialVector combined(sys.n());
    for (std::size_t i = 0; i < sys.n(); ++i)
        combined[i] = sol.proper_numerators()[i] + sol.polynomial_part()[i] * sol.denominator();
    const PolynomialVector lhs = p.apply(combined);
    const RationalVector ew = sys.E().apply(sol.w());
    for (std::size_t i = 0; i < sys.n(); ++i)
        if (!(lhs[i] == RationalPolynomial(ew[i]) * sol.denominator()))
            return false;
    return true;
}

} // namespace detail_suite

// Frequency-domain solutions: residual identity, standard systems having no
// polynomial part, and the bridge from unobserved impulsive content to a
// verified witness.
inline SuiteStats suite_frequency_bridge(const Options& opt) {
    SuiteStats st;
    st.name = "frequency-bridge";
    std::mt19937_64 rng(opt.seed ^ 0xe5ull);

    const auto run_probe = [&](const DescriptorSystem& sys, const RationalVector& w) {
        ++st.cases;
        const FrequencySolution sol = solve_frequency(sys, w);
        ++st.checks;
        if (!detail_suite::frequency_residual_holds(sys, sol)) {
            record_failure(st, sys, "residual identity fails");
            return std::optional<ImpulseWitness>();
        }
        if (sys.is_standard()) {
            ++st.checks;
            if (!poly_vector_is_zero(sol.polynomial_part()))
                record_failure(st, sys, "standard system with nonzero polynomial part");
        }
        std::optional<ImpulseWitness> wit;
        try {
            wit = polynomial_witness_from_solution(sys, sol);
        } catch (const internal_defect& e) {
            record_failure(st, sys, std::string("bridge witness construction failed: ") + e.what());
            return std::optional<ImpulseWitness>();
        }
        if (wit) {
            ++st.checks;
            if (!verify_witness(sys, *wit))
                record_failure(st, sys, "bridge witness fails verification");
        }
        return wit;
    };

    if (opt.trials > 0) {
        // Probe the shift-pencil samples with their canonical excitations.
        const DescriptorSystem s1 = sample_n2(true);
        const DescriptorSystem s2 = sample_n2(false);
        const DescriptorSystem n3 = sample_n3();
        if (run_probe(s1, {Rational(0), Rational(1)})) {
            record_failure(st, s1, "observed impulsive content treated as unobserved");
        }
        const auto w2 = run_probe(s2, {Rational(0), Rational(1)});
        ++st.checks;
        if (!w2 || w2->order() != 0)
            record_failure(st, s2, "expected an order-0 bridge witness");
        const auto w3 = run_probe(n3, {Rational(0), Rational(0), Rational(1)});
        ++st.checks;
        if (!w3 || w3->order() != 1)
            record_failure(st, n3, "expected an order-1 bridge witness");
    }

    const std::size_t trials = opt.trials / 5;
    for (std::size_t t = 0; t < trials; ++t) {
        const DescriptorSystem sys = draw_system(rng, opt.max_n, opt.entry_range);
        RationalVector w(sys.n());
        for (std::size_t i = 0; i < sys.n(); ++i)
            w[i] = impob::detail::bounded_draw(rng, 3);
        run_probe(sys, w);
    }
    return st;
}

// Hand-checked instances with frozen expected values.
inline SuiteStats suite_fixed_instances() {
    SuiteStats st;
    st.name = "fixed-instances";
    const auto expect = [&st](const DescriptorSystem& sys, bool ok, const std::string& what) {
        ++st.checks;
        if (!ok)
            record_failure(st, sys, what);
    };

    {
        const DescriptorSystem s1 = sample_n2(true);
        ++st.cases;
        const OrderCheck oc = check_order_r(s1, 0);
        expect(s1, oc.rank_found == 3 && oc.rank_required == 3 && oc.holds,
               "output-on-x1 shift pair: expected rank 3 of 3");
        expect(s1, is_impulse_observable(s1, Strategy::all_orders()).verdict,
               "output-on-x1 shift pair: expected observable");
        expect(s1, !find_witness(s1, 0), "output-on-x1 shift pair: unexpected witness");
    }
    {
        const DescriptorSystem s2 = sample_n2(false);
        ++st.cases;
        const OrderCheck oc = check_order_r(s2, 0);
        expect(s2, oc.rank_found == 2 && oc.rank_required == 3 && !oc.holds,
               "output-on-x2 shift pair: expected rank 2 of 3");
        const std::optional<ImpulseWitness> w = find_witness(s2, 0);
        const ImpulseWitness expected({Rational(0), Rational(-1)}, {{Rational(1), Rational(0)}});
        expect(s2, w.has_value() && *w == expected,
               "output-on-x2 shift pair: wrong witness");
    }
    {
        const DescriptorSystem n3 = sample_n3();
        ++st.cases;
        const OrderCheck oc = check_order_r(n3, 1);
        expect(n3, oc.rank_found == 6 && oc.rank_required == 8 && !oc.holds,
               "three-state shift: expected rank 6 of 8 at r=1");
        const std::optional<ImpulseWitness> w = find_witness(n3, 1);
        const ImpulseWitness expected({Rational(0), Rational(0), Rational(1)},
                                      {{Rational(0), Rational(-1), Rational(0)},
                                       {Rational(1), Rational(0), Rational(0)}});
        expect(n3, w.has_value() && *w == expected, "three-state shift: wrong order-1 witness");
        if (w && w->order() == 1) {
            const ImpulseWitness reduced = order_reduce(n3, *w);
            const ImpulseWitness expected_reduced({Rational(0), Rational(-1), Rational(0)},
                                                  {{Rational(1), Rational(0), Rational(0)}});
            expect(n3, reduced == expected_reduced, "three-state shift: wrong reduced witness");
        }
    }
    {
        // Zero pencil: irregular, must be rejected.
        ++st.cases;
        bool rejected = false;
        try {
            DescriptorSystem::validate(RationalMatrix(1, 1), RationalMatrix(1, 1),
                                       RationalMatrix::from_rows({{1}}));
        } catch (const irregular_pencil&) {
            rejected = true;
        }
        ++st.checks;
        if (!rejected) {
            ++st.failures;
            if (st.failures == 1)
                st.first_failure = "zero 1x1 pencil accepted as regular";
        }
    }
    {
        // Invertible E: trivially impulse observable whatever C is.
        const DescriptorSystem std_sys = DescriptorSystem::validate(
            RationalMatrix::identity(2), RationalMatrix::from_rows({{0, 1}, {-2, -3}}),
            RationalMatrix::from_rows({{0, 0}}));
        ++st.cases;
        expect(std_sys, std_sys.is_standard(), "invertible E not flagged standard");
        expect(std_sys, is_impulse_observable(std_sys, Strategy::all_orders()).verdict,
               "standard system judged unobservable");
    }
    return st;
}

inline SuiteStats suite_float_agreement(const FloatAgreement& fa, double bar = 0.99) {
    SuiteStats st;
    st.name = "float-agreement";
    st.cases = fa.total;
    st.checks = fa.total;
    if (fa.total > 0 && fa.ratio() < bar) {
        st.failures = fa.total - fa.agree;
        st.first_failure = "agreement " + std::to_string(fa.ratio() * 100.0) + "% below bar";
    }
    return st;
}

struct RunResult {
    std::vector<SuiteStats> suites;
    bool ok = true;
    std::optional<json> counterexample;
    FloatAgreement float_stats;
};

inline RunResult run_all(const Options& opt) {
    RunResult res;
    if (opt.inject_failure) {
        SuiteStats st;
        st.name = "injected-failure";
        st.cases = 1;
        st.checks = 1;
        st.failures = 1;
        st.first_failure = "failure injection requested";
        st.counterexample = describe_counterexample(sample_n2(false), st.name, st.first_failure);
        res.suites.push_back(std::move(st));
    } else {
        res.suites.push_back(suite_order_equivalence(opt, &res.float_stats));
        auto [agree, identity] = suite_canonical_cross_validation(opt);
        res.suites.push_back(std::move(agree));
        res.suites.push_back(std::move(identity));
        res.suites.push_back(suite_witness_soundness(opt));
        res.suites.push_back(suite_order_reduction(opt));
        res.suites.push_back(suite_frequency_bridge(opt));
        res.suites.push_back(suite_fixed_instances());
        res.suites.push_back(suite_float_agreement(res.float_stats));
    }
    for (const SuiteStats& st : res.suites) {
        if (!st.passed()) {
            res.ok = false;
            if (!res.counterexample && st.counterexample)
                res.counterexample = st.counterexample;
        }
    }
    return res;
}

} // namespace impob::selftest
