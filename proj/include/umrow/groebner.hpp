#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "umrow/errors.hpp"
#include "umrow/ring.hpp"

namespace umrow {

struct GroebnerOptions {
    MonomialOrder order = MonomialOrder::Degrevlex;
    bool with_cofactors = false;
    // Number of S-pairs processed before giving up. Aborting raises
    // ResourceAbort, which is not a refutation of anything.
    std::size_t max_pairs = 100000;
    bool use_cache = true;
};

struct GroebnerBasis {
    MonomialOrder order = MonomialOrder::Degrevlex;
    std::size_t nvars = 0;
    std::vector<Poly> gens;
    std::vector<Poly> basis;  // reduced, monic, sorted by leading term ascending
    // basis[i] == sum_k cofactors[i][k] * gens[k] when has_cofactors.
    std::vector<std::vector<Poly>> cofactors;
    bool has_cofactors = false;

    bool contains_one() const {
        return basis.size() == 1 && basis[0].is_constant() && !basis[0].is_zero();
    }
};

// Full normal form of p against basis under ord. If quotients is non-null it
// receives one polynomial per basis element with p = sum q_i b_i + remainder.
inline Poly reduce_full(const Poly& p, const std::vector<Poly>& basis, MonomialOrder ord,
                        std::vector<Poly>* quotients = nullptr) {
    std::size_t nv = p.nvars();
    if (quotients) quotients->assign(basis.size(), Poly(nv));
    Poly rem(nv);
    Poly work = p;
    while (!work.is_zero()) {
        const Term& lt = work.leading(ord);
        bool reduced = false;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (basis[i].is_zero()) continue;
            const Term& bt = basis[i].leading(ord);
            if (!mono_divides(bt.mono, lt.mono)) continue;
            Monomial qm = mono_div(lt.mono, bt.mono);
            Rat qc = lt.coef / bt.coef;
            work = work - basis[i].times_term(qm, qc);
            if (quotients) (*quotients)[i] = (*quotients)[i] + Poly::term(nv, qm, qc);
            reduced = true;
            break;
        }
        if (!reduced) {
            Poly ltp = Poly::term(nv, lt.mono, lt.coef);
            rem = rem + ltp;
            work = work - ltp;
        }
    }
    return rem;
}

inline Poly reduce(const Poly& p, const GroebnerBasis& gb, std::vector<Poly>* quotients = nullptr) {
    if (p.nvars() != gb.nvars)
        throw RingMismatchError("reduce: polynomial from a different ring");
    return reduce_full(p, gb.basis, gb.order, quotients);
}

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string gb_cache_key(const std::vector<Poly>& gens, const RingSpec& ring,
                                const GroebnerOptions& opt) {
    std::string key = opt.order == MonomialOrder::Lex ? "lex" : "degrevlex";
    key += opt.with_cofactors ? ";cof" : ";plain";
    for (const auto& v : ring.vars) key += "\x1f" + v;
    key += "\x1e";
    for (const auto& g : gens) key += "\x1f" + poly_to_string(g, ring);
    return key;
}

inline std::optional<GroebnerBasis> gb_cache_load(const std::string& dir, const std::string& key,
                                                  const std::vector<Poly>& gens,
                                                  const RingSpec& ring,
                                                  const GroebnerOptions& opt) {
    namespace fs = std::filesystem;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
    fs::path file = fs::path(dir) / (std::string(buf) + ".gb");
    std::ifstream in(file);
    if (!in) return std::nullopt;
    std::string header, stored_key;
    if (!std::getline(in, header) || header != "umrow-gb-cache 1") return std::nullopt;
    if (!std::getline(in, stored_key) || stored_key != key) return std::nullopt;
    try {
        GroebnerBasis gb;
        gb.order = opt.order;
        gb.nvars = ring.nvars();
        gb.gens = gens;
        gb.has_cofactors = opt.with_cofactors;
        std::size_t nb = 0;
        in >> nb;
        in.ignore();
        std::string line;
        for (std::size_t i = 0; i < nb; ++i) {
            if (!std::getline(in, line)) return std::nullopt;
            gb.basis.push_back(parse_poly(line, ring));
        }
        if (opt.with_cofactors) {
            for (std::size_t i = 0; i < nb; ++i) {
                std::vector<Poly> row;
                for (std::size_t k = 0; k < gens.size(); ++k) {
                    if (!std::getline(in, line)) return std::nullopt;
                    row.push_back(parse_poly(line, ring));
                }
                gb.cofactors.push_back(std::move(row));
            }
        }
        return gb;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline void gb_cache_store(const std::string& dir, const std::string& key,
                           const GroebnerBasis& gb, const RingSpec& ring) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) return;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
    std::mt19937_64 rng(std::random_device{}());
    fs::path tmp = fs::path(dir) / (std::string(buf) + "." + std::to_string(rng()) + ".tmp");
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << "umrow-gb-cache 1\n" << key << "\n" << gb.basis.size() << "\n";
        for (const auto& b : gb.basis) out << poly_to_string(b, ring) << "\n";
        if (gb.has_cofactors)
            for (const auto& row : gb.cofactors)
                for (const auto& c : row) out << poly_to_string(c, ring) << "\n";
    }
    fs::rename(tmp, fs::path(dir) / (std::string(buf) + ".gb"), ec);
    if (ec) fs::remove(tmp, ec);
}

}  // namespace detail

// Buchberger with the normal selection strategy and both classical criteria.
// Deterministic: pair selection, insertion order and post-reduction are all
// tie-broken canonically, so identical inputs give identical bases and
// cofactor matrices.
inline GroebnerBasis groebner(const std::vector<Poly>& gens, const RingSpec& ring,
                              GroebnerOptions opt = {}) {
    for (const auto& g : gens)
        if (g.nvars() != ring.nvars())
            throw RingMismatchError("groebner: generator from a different ring");

    const char* cache_dir = std::getenv("UMROW_CACHE_DIR");
    std::string key;
    if (opt.use_cache && cache_dir && *cache_dir) {
        key = detail::gb_cache_key(gens, ring, opt);
        if (auto hit = detail::gb_cache_load(cache_dir, key, gens, ring, opt)) return *hit;
    }

    const std::size_t nv = ring.nvars();
    const MonomialOrder ord = opt.order;
    std::vector<Poly> basis;
    std::vector<std::vector<Poly>> rows;

    auto unit_row = [&](std::size_t k) {
        std::vector<Poly> r(gens.size(), Poly(nv));
        r[k] = Poly::constant(nv, 1);
        return r;
    };
    for (std::size_t k = 0; k < gens.size(); ++k) {
        if (gens[k].is_zero()) continue;
        basis.push_back(gens[k]);
        rows.push_back(unit_row(k));
    }

    struct Pair {
        std::size_t i, j;
        Monomial lcm;
    };
    std::vector<Pair> pending;
    auto add_pairs_for = [&](std::size_t j) {
        for (std::size_t i = 0; i < j; ++i)
            pending.push_back({i, j, mono_lcm(basis[i].leading(ord).mono,
                                              basis[j].leading(ord).mono)});
    };
    for (std::size_t j = 0; j < basis.size(); ++j) add_pairs_for(j);

    auto is_pending = [&](std::size_t a, std::size_t b) {
        for (const auto& pr : pending)
            if ((pr.i == a && pr.j == b) || (pr.i == b && pr.j == a)) return true;
        return false;
    };

    std::size_t processed = 0;
    while (!pending.empty()) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < pending.size(); ++k) {
            int c = mono_cmp(pending[k].lcm, pending[best].lcm, ord);
            if (c < 0 || (c == 0 && (pending[k].i < pending[best].i ||
                                     (pending[k].i == pending[best].i &&
                                      pending[k].j < pending[best].j))))
                best = k;
        }
        Pair pr = pending[best];
        pending.erase(pending.begin() + best);
        if (++processed > opt.max_pairs)
            throw ResourceAbort("groebner: pair budget exceeded (" +
                                std::to_string(opt.max_pairs) + ")");

        const Term& lti = basis[pr.i].leading(ord);
        const Term& ltj = basis[pr.j].leading(ord);
        // First criterion: coprime leading monomials.
        if (pr.lcm == mono_mul(lti.mono, ltj.mono)) continue;
        // Chain criterion.
        bool chained = false;
        for (std::size_t k = 0; k < basis.size() && !chained; ++k) {
            if (k == pr.i || k == pr.j) continue;
            if (mono_divides(basis[k].leading(ord).mono, pr.lcm) && !is_pending(pr.i, k) &&
                !is_pending(pr.j, k))
                chained = true;
        }
        if (chained) continue;

        Poly si = basis[pr.i].times_term(mono_div(pr.lcm, lti.mono), Rat(1) / lti.coef);
        Poly sj = basis[pr.j].times_term(mono_div(pr.lcm, ltj.mono), Rat(1) / ltj.coef);
        Poly s = si - sj;
        std::vector<Poly> quot;
        Poly nf = reduce_full(s, basis, ord, opt.with_cofactors ? &quot : nullptr);
        if (nf.is_zero()) continue;

        if (opt.with_cofactors) {
            std::vector<Poly> row(gens.size(), Poly(nv));
            Poly mi = Poly::term(nv, mono_div(pr.lcm, lti.mono), Rat(1) / lti.coef);
            Poly mj = Poly::term(nv, mono_div(pr.lcm, ltj.mono), Rat(1) / ltj.coef);
            for (std::size_t k = 0; k < gens.size(); ++k)
                row[k] = mi * rows[pr.i][k] - mj * rows[pr.j][k];
            for (std::size_t b = 0; b < basis.size(); ++b) {
                if (quot[b].is_zero()) continue;
                for (std::size_t k = 0; k < gens.size(); ++k)
                    row[k] = row[k] - quot[b] * rows[b][k];
            }
            rows.push_back(std::move(row));
        }
        basis.push_back(nf);
        add_pairs_for(basis.size() - 1);
    }

    // Minimalize: drop elements whose leading term is divisible by another's.
    std::vector<std::size_t> idx(basis.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return mono_cmp(basis[a].leading(ord).mono, basis[b].leading(ord).mono, ord) < 0;
    });
    std::vector<Poly> minimal;
    std::vector<std::vector<Poly>> minimal_rows;
    for (std::size_t t : idx) {
        const Monomial& lt = basis[t].leading(ord).mono;
        bool dominated = false;
        for (const auto& kept : minimal)
            if (mono_divides(kept.leading(ord).mono, lt)) { dominated = true; break; }
        if (dominated) continue;
        minimal.push_back(basis[t]);
        if (opt.with_cofactors) minimal_rows.push_back(rows[t]);
    }

    // Tail-reduce and make monic.
    GroebnerBasis out;
    out.order = ord;
    out.nvars = nv;
    out.gens = gens;
    out.has_cofactors = opt.with_cofactors;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Poly> others;
        std::vector<std::size_t> omap;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) { others.push_back(minimal[j]); omap.push_back(j); }
        std::vector<Poly> quot;
        Poly nf = reduce_full(minimal[i], others, ord, opt.with_cofactors ? &quot : nullptr);
        std::vector<Poly> row;
        if (opt.with_cofactors) {
            row = minimal_rows[i];
            for (std::size_t j = 0; j < others.size(); ++j) {
                if (quot[j].is_zero()) continue;
                for (std::size_t k = 0; k < gens.size(); ++k)
                    row[k] = row[k] - quot[j] * minimal_rows[omap[j]][k];
            }
        }
        Rat lc = nf.leading(ord).coef;
        nf = (Rat(1) / lc) * nf;
        if (opt.with_cofactors) {
            for (auto& c : row) c = (Rat(1) / lc) * c;
            out.cofactors.push_back(std::move(row));
        }
        out.basis.push_back(std::move(nf));
    }

    if (opt.use_cache && cache_dir && *cache_dir)
        detail::gb_cache_store(cache_dir, key, out, ring);
    return out;
}

struct MembershipResult {
    bool member = false;
    // p == sum_k cofactors[k] * gens[k] when member.
    std::vector<Poly> cofactors;
    Poly normal_form;
};

inline MembershipResult membership_certificate(const Poly& p, const std::vector<Poly>& gens,
                                               const RingSpec& ring, GroebnerOptions opt = {}) {
    opt.with_cofactors = true;
    GroebnerBasis gb = groebner(gens, ring, opt);
    std::vector<Poly> quot;
    MembershipResult res;
    res.normal_form = reduce(p, gb, &quot);
    if (!res.normal_form.is_zero()) return res;
    res.member = true;
    res.cofactors.assign(gens.size(), Poly(ring.nvars()));
    for (std::size_t b = 0; b < gb.basis.size(); ++b) {
        if (quot[b].is_zero()) continue;
        for (std::size_t k = 0; k < gens.size(); ++k)
            res.cofactors[k] = res.cofactors[k] + quot[b] * gb.cofactors[b][k];
    }
    return res;
}

}  // namespace umrow
