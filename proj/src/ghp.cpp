#include "totient/ghp.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <nlohmann/json.hpp>

#include "totient/errors.hpp"
#include "totient/primality.hpp"

namespace totient {

std::string_view to_string(GhpReason r) {
    switch (r) {
        case GhpReason::ok: return "ok";
        case GhpReason::ell_even: return "no valid j: ell even";
        case GhpReason::ell_not_mersenne: return "no valid j: ell not of form 2^m-1";
        case GhpReason::t_zero: return "t must be >= 1";
        case GhpReason::q1_composite: return "t+1 composite";
        case GhpReason::q2_composite: return "(ell+1)t+1 composite";
        case GhpReason::divides_j: return "prime divides j";
        case GhpReason::overflow: return "value exceeds 64 bits";
    }
    return "unknown";
}

std::optional<unsigned> mersenne_exponent(u64 ell) {
    if (ell == 0 || ell == ~u64{0}) return std::nullopt;
    u64 next = ell + 1;
    if ((next & (next - 1)) != 0) return std::nullopt;
    return static_cast<unsigned>(__builtin_ctzll(next));
}

GhpResult ghp_construct(u64 ell, u64 t) {
    if (ell == 0 || ell % 2 == 0) return {std::nullopt, GhpReason::ell_even};
    if (!mersenne_exponent(ell)) return {std::nullopt, GhpReason::ell_not_mersenne};
    if (t == 0) return {std::nullopt, GhpReason::t_zero};

    const u128 j = 2;
    const u128 k = u128{2} * ell;
    const u128 g = 2;  // gcd(2, 2 + 2 ell) with ell odd
    const u128 q1 = j * t / g + 1;
    const u128 q2 = (j + k) * t / g + 1;
    const u128 n = j * q2;
    const u128 p = n + ell;
    if (p > ~u64{0} || k > ~u64{0}) return {std::nullopt, GhpReason::overflow};

    if (q1 == 2 || q2 == 2) return {std::nullopt, GhpReason::divides_j};
    if (!is_prime_u64(static_cast<u64>(q1))) return {std::nullopt, GhpReason::q1_composite};
    if (!is_prime_u64(static_cast<u64>(q2))) return {std::nullopt, GhpReason::q2_composite};

    GhpWitness w;
    w.ell = ell;
    w.j = static_cast<u64>(j);
    w.k = static_cast<u64>(k);
    w.g = static_cast<u64>(g);
    w.t = t;
    w.n = static_cast<u64>(n);
    w.p = static_cast<u64>(p);
    w.q1 = static_cast<u64>(q1);
    w.q2 = static_cast<u64>(q2);
    w.p_prime = is_prime_u64(w.p);
    return {w, GhpReason::ok};
}

u64 TriplePattern::f1(u64 t) const { return 2 * (ell + 1) * t + (ell + 2); }
u64 TriplePattern::f2(u64 t) const { return t + 1; }
u64 TriplePattern::f3(u64 t) const { return (ell + 1) * t + 1; }

int TriplePattern::divisible_by_three(u64 t) const {
    if (exponent_odd()) {
        // f1 = t, f2 = t + 1, f3 = 1 - t (mod 3)
        switch (t % 3) {
            case 0: return 1;
            case 2: return 2;
            default: return 3;
        }
    }
    return 0;
}

TripleEnumeration triple_enumerate(u64 ell, u64 t_max) {
    auto m = mersenne_exponent(ell);
    if (!m) throw DomainError("triple pattern needs ell = 2^m - 1, got " + std::to_string(ell));
    if (t_max < 1) throw DomainError("t_max must be >= 1");
    const u128 f1_max = u128{2} * (u128{ell} + 1) * t_max + ell + 2;
    if (f1_max > ~u64{0}) throw DomainError("f1(t_max) exceeds 64 bits");

    TripleEnumeration out;
    out.pattern = TriplePattern{ell, *m};
    const TriplePattern& pat = out.pattern;
    for (u64 t = 1; t <= t_max; ++t) {
        // cheapest test first
        if (!is_prime_u64(pat.f2(t)) || !is_prime_u64(pat.f3(t)) || !is_prime_u64(pat.f1(t))) continue;
        TripleHit h{t, pat.f1(t), pat.f2(t), pat.f3(t), pat.divisible_by_three(t)};
        out.hits.push_back(h);
    }
    return out;
}

std::vector<unsigned> odd_exponents_with_t2_triple(unsigned m_bound) {
    using boost::multiprecision::cpp_int;
    boost::random::mt19937 gen(12345);
    std::vector<unsigned> out;
    for (unsigned m = 1; m < m_bound; m += 2) {
        cpp_int f1 = 5 * (cpp_int(1) << m) + 1;
        cpp_int f3 = (cpp_int(1) << (m + 1)) + 1;
        if (boost::multiprecision::miller_rabin_test(f3, 25, gen) &&
            boost::multiprecision::miller_rabin_test(f1, 25, gen)) {
            out.push_back(m);
        }
    }
    return out;
}

EqualityClassification classify_equality(u64 ell, u64 x, std::span<const u64> eq_primes) {
    EqualityClassification out;
    out.ell = ell;
    out.x = x;
    const bool has_form = ell % 2 == 1 && mersenne_exponent(ell).has_value();
    const u128 step = u128{2} * (u128{ell} + 1);
    for (u64 p : eq_primes) {
        std::optional<GhpWitness> witness;
        if (has_form && p > ell + 2 && (p - ell - 2) % step == 0) {
            u64 t = static_cast<u64>((p - ell - 2) / step);
            GhpResult r = ghp_construct(ell, t);
            if (r.witness && r.witness->p == p) witness = r.witness;
        }
        if (witness) {
            out.ghp_form.push_back(*witness);
        } else {
            out.sporadic.push_back(p);
        }
    }
    return out;
}

std::string classification_csv(std::span<const EqualityClassification> rows) {
    std::string out = "ell,x,eq_total,ghp_form,sporadic\n";
    for (const auto& r : rows) {
        out += std::to_string(r.ell) + ',' + std::to_string(r.x) + ',' +
               std::to_string(r.ghp_form.size() + r.sporadic.size()) + ',' + std::to_string(r.ghp_form.size()) + ',' +
               std::to_string(r.sporadic.size()) + '\n';
    }
    return out;
}

std::string witnesses_json(std::span<const GhpWitness> witnesses) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& w : witnesses) {
        arr.push_back({{"ell", w.ell}, {"j", w.j}, {"k", w.k}, {"g", w.g}, {"t", w.t}, {"n", w.n}, {"p", w.p},
                       {"q1", w.q1}, {"q2", w.q2}, {"p_prime", w.p_prime}});
    }
    return arr.dump(2) + "\n";
}

}  // namespace totient
