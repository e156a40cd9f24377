#pragma once

// Sparse truncated multivariate series over an exact scalar ring.
//
// Variables fall into two groups: formal variables (x, y, z, a, ...) whose
// total degree is capped inclusively, and coefficient variables (u_1, ...,
// u_n) whose total degree is capped exclusively by a precision (0 means
// uncapped). Truncation is the quotient by a monomial ideal, so it commutes
// with every ring operation and is applied eagerly.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace fgld {

using Monomial = std::uint64_t;

class SeriesSpace {
public:
    SeriesSpace(std::vector<std::string> formal, std::vector<std::string> coeff_vars, int formal_cap, int u_precision = 0)
        : formal_(std::move(formal)), u_(std::move(coeff_vars)), formal_cap_(formal_cap), u_prec_(u_precision) {
        const std::size_t n = nvars();
        if (n == 0 || n > 8) throw Error(ErrorKind::InvalidConfig, "series space needs 1..8 variables");
        bits_ = static_cast<int>(64 / n);
        if (bits_ > 16) bits_ = 16;
        max_exp_ = (1 << (bits_ - 1)) - 1;
        field_ = (Monomial(1) << bits_) - 1;
        for (std::size_t i = 0; i < n; ++i) guard_ |= Monomial(1) << (shift(i) + bits_ - 1);
        if (formal_cap_ < 0 || formal_cap_ > max_exp_ || u_prec_ < 0 || u_prec_ > max_exp_ + 1)
            throw Error(ErrorKind::ExponentOverflow, "caps exceed exponent width of this space");
    }

    static std::shared_ptr<const SeriesSpace> make(std::vector<std::string> formal, std::vector<std::string> u,
                                                   int formal_cap, int u_precision = 0) {
        return std::make_shared<const SeriesSpace>(std::move(formal), std::move(u), formal_cap, u_precision);
    }

    std::size_t nvars() const { return formal_.size() + u_.size(); }
    std::size_t nformal() const { return formal_.size(); }
    int formal_cap() const { return formal_cap_; }
    int u_precision() const { return u_prec_; }
    int max_exponent() const { return max_exp_; }
    const std::vector<std::string>& formal_names() const { return formal_; }
    const std::vector<std::string>& u_names() const { return u_; }

    const std::string& name(std::size_t i) const { return i < formal_.size() ? formal_[i] : u_[i - formal_.size()]; }
    bool is_formal(std::size_t i) const { return i < formal_.size(); }

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < nvars(); ++i)
            if (this->name(i) == name) return static_cast<int>(i);
        throw Error(ErrorKind::VariableMismatch, "unknown variable '" + name + "'");
    }

    int exponent(Monomial m, std::size_t i) const { return static_cast<int>((m >> shift(i)) & field_); }

    Monomial pack(std::span<const int> e) const {
        if (e.size() != nvars()) throw Error(ErrorKind::VariableMismatch, "exponent tuple has wrong length");
        Monomial m = 0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] < 0 || e[i] > max_exp_) throw Error(ErrorKind::ExponentOverflow, "exponent out of range");
            m |= Monomial(e[i]) << shift(i);
        }
        return m;
    }
    Monomial unit_monomial(std::size_t i, int e = 1) const {
        std::vector<int> v(nvars(), 0);
        v[i] = e;
        return pack(v);
    }

    std::vector<int> unpack(Monomial m) const {
        std::vector<int> e(nvars());
        for (std::size_t i = 0; i < nvars(); ++i) e[i] = exponent(m, i);
        return e;
    }

    int formal_degree(Monomial m) const {
        int d = 0;
        for (std::size_t i = 0; i < formal_.size(); ++i) d += exponent(m, i);
        return d;
    }
    int u_degree(Monomial m) const {
        int d = 0;
        for (std::size_t i = formal_.size(); i < nvars(); ++i) d += exponent(m, i);
        return d;
    }

    bool keeps(int fdeg, int udeg) const { return fdeg <= formal_cap_ && (u_prec_ == 0 || udeg < u_prec_); }

    Monomial multiply(Monomial a, Monomial b) const {
        const Monomial m = a + b;
        if (m & guard_) throw Error(ErrorKind::ExponentOverflow, "monomial exponent overflow");
        return m;
    }

    friend bool operator==(const SeriesSpace& a, const SeriesSpace& b) {
        return a.formal_ == b.formal_ && a.u_ == b.u_ && a.formal_cap_ == b.formal_cap_ && a.u_prec_ == b.u_prec_;
    }

private:
    int shift(std::size_t i) const { return static_cast<int>((nvars() - 1 - i) * static_cast<std::size_t>(bits_)); }

    std::vector<std::string> formal_;
    std::vector<std::string> u_;
    int formal_cap_;
    int u_prec_;
    int bits_ = 8;
    int max_exp_ = 127;
    Monomial field_ = 0xff;
    Monomial guard_ = 0;
};

using SpacePtr = std::shared_ptr<const SeriesSpace>;

template <class T>
class MultiSeries {
public:
    struct Term {
        Monomial mono;
        int fdeg;
        int udeg;
        T coeff;
    };

    MultiSeries(SpacePtr space, T zero) : space_(std::move(space)), zero_(scalar_like(zero, 0)) {}

    static MultiSeries constant(SpacePtr space, const T& c) {
        MultiSeries s(space, c);
        s.insert_raw(0, c);
        return s;
    }
    static MultiSeries variable(SpacePtr space, const std::string& name, const T& proto) {
        MultiSeries s(space, proto);
        s.insert_raw(space->unit_monomial(static_cast<std::size_t>(space->index_of(name))), scalar_like(proto, 1));
        return s;
    }
    static MultiSeries monomial(SpacePtr space, std::span<const int> exps, const T& c) {
        MultiSeries s(space, c);
        s.insert_raw(space->pack(exps), c);
        return s;
    }
    /// Builds from (exponent tuple, coefficient) pairs, summing duplicates.
    static MultiSeries from_terms(SpacePtr space, const T& proto, const std::vector<std::pair<std::vector<int>, T>>& terms) {
        std::unordered_map<Monomial, T> acc;
        for (const auto& [e, c] : terms) {
            auto [it, fresh] = acc.try_emplace(space->pack(e), c);
            if (!fresh) it->second += c;
        }
        return from_map(std::move(space), proto, acc);
    }

    const SpacePtr& space() const { return space_; }
    const std::vector<Term>& terms() const { return terms_; }
    const T& zero() const { return zero_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    T coefficient(std::span<const int> exps) const { return coefficient(space_->pack(exps)); }
    T coefficient(Monomial m) const {
        const int fd = space_->formal_degree(m);
        auto it = std::lower_bound(terms_.begin(), terms_.end(), std::make_pair(fd, m),
                                   [](const Term& t, const std::pair<int, Monomial>& key) {
                                       return canonical_less(t.fdeg, t.mono, key.first, key.second);
                                   });
        if (it != terms_.end() && it->mono == m) return it->coeff;
        return zero_;
    }

    /// Constant term in the formal variables: a series in the u-variables only.
    MultiSeries formal_constant_part() const { return filter([](const Term& t) { return t.fdeg == 0; }); }
    MultiSeries formal_degree_part(int k) const { return filter([k](const Term& t) { return t.fdeg == k; }); }
    MultiSeries drop_above_formal_degree(int k) const { return filter([k](const Term& t) { return t.fdeg <= k; }); }

    /// Keeps terms whose exponent in variable `var` is at most k (quotient by var^{k+1}).
    MultiSeries drop_var_above(const std::string& var, int k) const {
        const auto i = static_cast<std::size_t>(space_->index_of(var));
        return filter([&](const Term& t) { return space_->exponent(t.mono, i) <= k; });
    }

    /// Sets the named variables to zero.
    MultiSeries set_to_zero(const std::vector<std::string>& vars) const {
        std::vector<std::size_t> idx;
        for (const auto& v : vars) idx.push_back(static_cast<std::size_t>(space_->index_of(v)));
        return filter([&](const Term& t) {
            return std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return space_->exponent(t.mono, i) == 0; });
        });
    }

    /// Re-expresses the series in another space; variable i of this space goes to
    /// variable `var_map[i]` of `target`. Terms beyond the target caps are dropped.
    MultiSeries remap(SpacePtr target, const std::vector<std::string>& names_in_target) const {
        if (names_in_target.size() != space_->nvars())
            throw Error(ErrorKind::VariableMismatch, "remap needs one target name per variable");
        std::vector<std::size_t> dest;
        for (const auto& n : names_in_target) dest.push_back(static_cast<std::size_t>(target->index_of(n)));
        std::unordered_map<Monomial, T> acc;
        for (const auto& t : terms_) {
            std::vector<int> e(target->nvars(), 0);
            for (std::size_t i = 0; i < space_->nvars(); ++i) e[dest[i]] += space_->exponent(t.mono, i);
            auto [it, fresh] = acc.try_emplace(target->pack(e), t.coeff);
            if (!fresh) it->second += t.coeff;
        }
        return from_map(std::move(target), zero_, acc);
    }

    /// Moves the series into `target`, matching variables by name. Variables
    /// missing from `target` must not occur in any term.
    MultiSeries restrict_to(SpacePtr target) const {
        std::vector<int> dest(space_->nvars(), -1);
        for (std::size_t i = 0; i < space_->nvars(); ++i) {
            for (std::size_t j = 0; j < target->nvars(); ++j)
                if (target->name(j) == space_->name(i)) dest[i] = static_cast<int>(j);
        }
        std::unordered_map<Monomial, T> acc;
        for (const auto& t : terms_) {
            std::vector<int> e(target->nvars(), 0);
            for (std::size_t i = 0; i < space_->nvars(); ++i) {
                const int ex = space_->exponent(t.mono, i);
                if (ex == 0) continue;
                if (dest[i] < 0)
                    throw Error(ErrorKind::VariableMismatch, "variable " + space_->name(i) + " missing from target space");
                e[static_cast<std::size_t>(dest[i])] = ex;
            }
            acc.emplace(target->pack(e), t.coeff);
        }
        return from_map(std::move(target), zero_, acc);
    }

    /// Coefficient of var^k, as a series in the remaining variables (same space).
    MultiSeries coefficient_in(const std::string& var, int k) const {
        const auto i = static_cast<std::size_t>(space_->index_of(var));
        const Monomial strip = k > 0 ? space_->unit_monomial(i, k) : 0;
        MultiSeries r(space_, zero_);
        for (const auto& t : terms_) {
            if (space_->exponent(t.mono, i) != k) continue;
            r.terms_.push_back({t.mono - strip, t.fdeg - (space_->is_formal(i) ? k : 0),
                                t.udeg - (space_->is_formal(i) ? 0 : k), t.coeff});
        }
        r.sort();
        return r;
    }

    /// Same variables, different caps.
    MultiSeries in_space(SpacePtr target) const {
        if (target->formal_names() != space_->formal_names() || target->u_names() != space_->u_names())
            throw Error(ErrorKind::VariableMismatch, "in_space requires identical variable lists");
        MultiSeries r(std::move(target), zero_);
        for (const auto& t : terms_)
            if (r.space_->keeps(t.fdeg, t.udeg)) r.terms_.push_back(t);
        return r;
    }

    template <class U, class F>
    MultiSeries<U> map_coefficients(const U& proto, F&& f) const {
        std::unordered_map<Monomial, U> acc;
        for (const auto& t : terms_) acc.emplace(t.mono, f(t.coeff));
        return MultiSeries<U>::from_map(space_, proto, acc);
    }

    MultiSeries operator-() const {
        MultiSeries r = *this;
        for (auto& t : r.terms_) t.coeff = zero_ - t.coeff;
        return r;
    }
    MultiSeries scaled(const T& c) const {
        if (is_zero_scalar(c)) return MultiSeries(space_, zero_);
        MultiSeries r = *this;
        for (auto& t : r.terms_) t.coeff *= c;
        r.prune();
        return r;
    }

    friend MultiSeries operator+(const MultiSeries& a, const MultiSeries& b) { return merge(a, b, false); }
    friend MultiSeries operator-(const MultiSeries& a, const MultiSeries& b) { return merge(a, b, true); }
    MultiSeries& operator+=(const MultiSeries& o) { return *this = *this + o; }
    MultiSeries& operator-=(const MultiSeries& o) { return *this = *this - o; }

    friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
        a.check_space(b);
        const SeriesSpace& sp = *a.space_;
        if (a.terms_.empty() || b.terms_.empty()) return MultiSeries(a.space_, a.zero_);
        std::unordered_map<Monomial, T> acc;
        acc.reserve(a.terms_.size() + b.terms_.size());
        T tmp = a.zero_;
        for (const auto& s : a.terms_) {
            for (const auto& t : b.terms_) {
                if (s.fdeg + t.fdeg > sp.formal_cap()) break;
                if (!sp.keeps(s.fdeg + t.fdeg, s.udeg + t.udeg)) continue;
                tmp = s.coeff;
                tmp *= t.coeff;
                auto [it, fresh] = acc.try_emplace(sp.multiply(s.mono, t.mono), tmp);
                if (!fresh) it->second += tmp;
            }
        }
        return from_map(a.space_, a.zero_, acc);
    }
    MultiSeries& operator*=(const MultiSeries& o) { return *this = *this * o; }

    MultiSeries pow(int e) const {
        MultiSeries r = constant(space_, scalar_like(zero_, 1));
        MultiSeries b = *this;
        for (; e > 0; e >>= 1) {
            if (e & 1) r *= b;
            if (e > 1) b *= b;
        }
        return r;
    }

    friend bool operator==(const MultiSeries& a, const MultiSeries& b) {
        if (!(*a.space_ == *b.space_) || a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].mono != b.terms_[i].mono || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
        return true;
    }

    MultiSeries derivative(const std::string& var) const {
        const auto i = static_cast<std::size_t>(space_->index_of(var));
        std::unordered_map<Monomial, T> acc;
        for (const auto& t : terms_) {
            const int e = space_->exponent(t.mono, i);
            if (e == 0) continue;
            acc.emplace(t.mono - space_->unit_monomial(i), t.coeff * scalar_like(zero_, e));
        }
        return from_map(space_, zero_, acc);
    }

    /// Simultaneous substitution of formal variables. Each substituted series
    /// must have zero constant term in the formal variables.
    MultiSeries compose(const std::vector<std::pair<std::string, MultiSeries>>& subs) const {
        std::vector<std::pair<std::size_t, const MultiSeries*>> idx;
        for (const auto& [name, s] : subs) {
            check_space(s);
            const auto i = static_cast<std::size_t>(space_->index_of(name));
            if (!space_->is_formal(i))
                throw Error(ErrorKind::VariableMismatch, "only formal variables can be substituted, got " + name);
            if (std::any_of(s.terms_.begin(), s.terms_.end(), [](const Term& t) { return t.fdeg == 0; }))
                throw Error(ErrorKind::NonzeroConstantTerm, "substitution for " + name + " has a nonzero constant term");
            idx.emplace_back(i, &s);
        }
        return compose_rec(terms_, idx, 0);
    }

    /// Multiplicative inverse; the formal constant term must be a scalar unit
    /// (plus nilpotent u-terms when the u-group is capped).
    MultiSeries invert_unit() const {
        const T c = coefficient(Monomial(0));
        if (is_zero_scalar(c)) throw Error(ErrorKind::NonUnitConstantTerm, "constant term is zero");
        if (space_->u_precision() == 0) {
            for (const auto& t : terms_)
                if (t.fdeg == 0 && t.mono != 0)
                    throw Error(ErrorKind::NonUnitConstantTerm, "constant term involves uncapped u-variables");
        }
        const T cinv = scalar_inverse(c);
        const MultiSeries two = constant(space_, scalar_like(zero_, 2));
        MultiSeries t = constant(space_, cinv);
        for (int iter = 0; iter < 64; ++iter) {
            MultiSeries next = t * (two - *this * t);
            if (next == t) return t;
            t = std::move(next);
        }
        throw Error(ErrorKind::NonUnitConstantTerm, "inverse did not converge");
    }

    /// Compositional inverse in the single formal variable.
    MultiSeries reversion() const {
        if (space_->nformal() != 1) throw Error(ErrorKind::VariableMismatch, "reversion needs exactly one formal variable");
        if (std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.fdeg == 0; }))
            throw Error(ErrorKind::NonzeroConstantTerm, "reversion of a series with nonzero constant term");
        const std::string& x = space_->name(0);
        MultiSeries lin(space_, zero_);
        for (const auto& t : terms_)
            if (t.fdeg == 1) lin.terms_.push_back({t.mono - space_->unit_monomial(0), 0, t.udeg, t.coeff});
        lin.sort();
        MultiSeries lin_inv(space_, zero_);
        try {
            lin_inv = lin.invert_unit();
        } catch (const Error&) {
            throw Error(ErrorKind::NonUnitLinearCoefficient, "linear coefficient is not a unit");
        }
        const MultiSeries xs = variable(space_, x, zero_);
        const MultiSeries ds = derivative(x);
        MultiSeries r = lin_inv * xs;
        for (int iter = 0; iter < 64; ++iter) {
            const MultiSeries defect = compose({{x, r}}) - xs;
            if (defect.is_zero()) return r;
            r = r - defect * ds.compose({{x, r}}).invert_unit();
        }
        throw Error(ErrorKind::NonUnitLinearCoefficient, "reversion did not converge");
    }

    /// Canonical text: terms by increasing formal degree, ties by decreasing
    /// exponent tuple; e.g. "x + y - 3*x^2*y*u1".
    std::string render() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& t : terms_) {
            const bool neg = scalar_is_negative(t.coeff);
            const T mag = neg ? zero_ - t.coeff : t.coeff;
            if (first) out += neg ? "-" : "";
            else out += neg ? " - " : " + ";
            first = false;
            const std::string mono = render_monomial(t.mono);
            const bool unit = mag == scalar_like(zero_, 1);
            if (mono.empty()) out += scalar_str(mag);
            else if (unit) out += mono;
            else out += scalar_str(mag) + "*" + mono;
        }
        return out;
    }

    /// Inverse of render().
    static MultiSeries parse(SpacePtr space, const T& proto, const std::string& text) {
        MultiSeries r(space, proto);
        std::unordered_map<Monomial, T> acc;
        std::size_t pos = 0;
        bool negative = false;
        auto skip_ws = [&] { while (pos < text.size() && text[pos] == ' ') ++pos; };
        skip_ws();
        if (text.substr(pos) == "0") return r;
        if (pos < text.size() && text[pos] == '-') { negative = true; ++pos; }
        while (pos < text.size()) {
            std::size_t end = text.find(' ', pos);
            const std::string term = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
            auto [mono, c] = parse_term(*space, proto, term);
            if (negative) c = scalar_like(proto, 0) - c;
            auto [it, fresh] = acc.try_emplace(mono, c);
            if (!fresh) it->second += c;
            if (end == std::string::npos) break;
            pos = end;
            skip_ws();
            if (pos >= text.size() || (text[pos] != '+' && text[pos] != '-'))
                throw Error(ErrorKind::ParseError, "expected + or - in '" + text + "'");
            negative = text[pos] == '-';
            ++pos;
            skip_ws();
        }
        return from_map(std::move(space), proto, acc);
    }

    static MultiSeries from_map(SpacePtr space, const T& proto, const std::unordered_map<Monomial, T>& acc) {
        MultiSeries r(std::move(space), proto);
        r.terms_.reserve(acc.size());
        for (const auto& [m, c] : acc) {
            if (is_zero_scalar(c)) continue;
            const int fd = r.space_->formal_degree(m);
            const int ud = r.space_->u_degree(m);
            if (!r.space_->keeps(fd, ud)) continue;
            r.terms_.push_back({m, fd, ud, c});
        }
        r.sort();
        return r;
    }

private:
    template <class U>
    friend class MultiSeries;

    static bool is_zero_scalar(const T& c) { return fgld::is_zero(c); }

    static bool canonical_less(int fa, Monomial ma, int fb, Monomial mb) {
        return fa != fb ? fa < fb : ma > mb;
    }

    void sort() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& a, const Term& b) { return canonical_less(a.fdeg, a.mono, b.fdeg, b.mono); });
    }
    void prune() {
        terms_.erase(std::remove_if(terms_.begin(), terms_.end(), [](const Term& t) { return is_zero_scalar(t.coeff); }),
                     terms_.end());
    }
    void insert_raw(Monomial m, const T& c) {
        const int fd = space_->formal_degree(m);
        const int ud = space_->u_degree(m);
        if (!is_zero_scalar(c) && space_->keeps(fd, ud)) terms_.push_back({m, fd, ud, c});
    }

    template <class Pred>
    MultiSeries filter(Pred keep) const {
        MultiSeries r(space_, zero_);
        for (const auto& t : terms_)
            if (keep(t)) r.terms_.push_back(t);
        return r;
    }

    void check_space(const MultiSeries& o) const {
        if (space_ != o.space_ && !(*space_ == *o.space_))
            throw Error(ErrorKind::VariableMismatch, "series live in different spaces");
    }

    static MultiSeries merge(const MultiSeries& a, const MultiSeries& b, bool subtract) {
        a.check_space(b);
        MultiSeries r(a.space_, a.zero_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() ||
                (i < a.terms_.size() && canonical_less(a.terms_[i].fdeg, a.terms_[i].mono, b.terms_[j].fdeg, b.terms_[j].mono))) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() ||
                       canonical_less(b.terms_[j].fdeg, b.terms_[j].mono, a.terms_[i].fdeg, a.terms_[i].mono)) {
                Term t = b.terms_[j++];
                if (subtract) t.coeff = a.zero_ - t.coeff;
                r.terms_.push_back(std::move(t));
            } else {
                Term t = a.terms_[i++];
                if (subtract) t.coeff -= b.terms_[j++].coeff;
                else t.coeff += b.terms_[j++].coeff;
                if (!is_zero_scalar(t.coeff)) r.terms_.push_back(std::move(t));
            }
        }
        return r;
    }

    MultiSeries compose_rec(const std::vector<Term>& outer, const std::vector<std::pair<std::size_t, const MultiSeries*>>& subs,
                            std::size_t k) const {
        if (k == subs.size()) {
            MultiSeries r(space_, zero_);
            std::unordered_map<Monomial, T> acc;
            for (const auto& t : outer) {
                auto [it, fresh] = acc.try_emplace(t.mono, t.coeff);
                if (!fresh) it->second += t.coeff;
            }
            return from_map(space_, zero_, acc);
        }
        const std::size_t var = subs[k].first;
        std::vector<std::vector<Term>> groups;
        for (const auto& t : outer) {
            const int e = space_->exponent(t.mono, var);
            if (static_cast<std::size_t>(e) >= groups.size()) groups.resize(static_cast<std::size_t>(e) + 1);
            Term stripped = t;
            stripped.mono = t.mono - space_->unit_monomial(var, e);
            stripped.fdeg -= e;
            groups[static_cast<std::size_t>(e)].push_back(std::move(stripped));
        }
        MultiSeries acc(space_, zero_);
        for (std::size_t e = groups.size(); e-- > 0;) {
            acc = acc * *subs[k].second;
            if (!groups[e].empty()) acc += compose_rec(groups[e], subs, k + 1);
        }
        return acc;
    }

    std::string render_monomial(Monomial m) const {
        std::string out;
        for (std::size_t i = 0; i < space_->nvars(); ++i) {
            const int e = space_->exponent(m, i);
            if (e == 0) continue;
            if (!out.empty()) out += "*";
            out += space_->name(i);
            if (e > 1) out += "^" + std::to_string(e);
        }
        return out;
    }

    static std::pair<Monomial, T> parse_term(const SeriesSpace& sp, const T& proto, const std::string& term) {
        std::vector<int> e(sp.nvars(), 0);
        T c = scalar_like(proto, 1);
        std::size_t pos = 0;
        while (pos <= term.size()) {
            std::size_t end = term.find('*', pos);
            const std::string f = term.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
            if (f.empty()) throw Error(ErrorKind::ParseError, "empty factor in '" + term + "'");
            if (std::isdigit(static_cast<unsigned char>(f[0]))) {
                c *= parse_scalar(proto, f);
            } else {
                const auto caret = f.find('^');
                const std::string name = f.substr(0, caret);
                const int ex = caret == std::string::npos ? 1 : std::stoi(f.substr(caret + 1));
                e[static_cast<std::size_t>(sp.index_of(name))] += ex;
            }
            if (end == std::string::npos) break;
            pos = end + 1;
        }
        return {sp.pack(e), c};
    }

    static T parse_scalar(const T& proto, const std::string& s) {
        if constexpr (std::is_same_v<T, PLocalRational>) {
            mpq_class q;
            if (q.set_str(s, 10) != 0) throw Error(ErrorKind::ParseError, "bad rational '" + s + "'");
            return PLocalRational(q);
        } else {
            return scalar_like(proto, std::stol(s));
        }
    }

    SpacePtr space_;
    T zero_;
    std::vector<Term> terms_;
};

using RationalSeries = MultiSeries<PLocalRational>;
using ModPSeries = MultiSeries<PrimeFieldElement>;

/// Reduction modulo p of a series whose coefficients are all p-integral.
inline ModPSeries reduce_series_mod_p(const RationalSeries& s, unsigned p) {
    return s.map_coefficients(PrimeFieldElement(0, p), [p](const PLocalRational& q) { return reduce_mod_p(q, p); });
}

inline bool all_p_integral(const RationalSeries& s, unsigned p) {
    return std::all_of(s.terms().begin(), s.terms().end(), [p](const auto& t) { return t.coeff.is_p_integral(p); });
}

}  // namespace fgld
