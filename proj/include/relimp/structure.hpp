#pragma once

// Binary monotone structure functions: truth tables, structure expressions,
// coherence checks, duals, minimal path/cut sets and signed domination.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relimp {

// Component i (1-based) occupies bit i-1 of a state mask.
constexpr std::uint32_t component_bit(int component) {
    return std::uint32_t{1} << (component - 1);
}

inline std::vector<int> mask_to_components(std::uint32_t mask) {
    std::vector<int> out;
    for (int i = 1; mask != 0; ++i, mask >>= 1)
        if (mask & 1u) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// Structure expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { component, series, parallel, k_out_of_n };

    Kind kind = Kind::component;
    int id = 0;                 // component leaves
    int k = 0;                  // k_out_of_n threshold
    std::vector<ExprPtr> args;  // operator nodes

    static ExprPtr component(int id) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::component;
        e->id = id;
        return e;
    }
    static ExprPtr series(std::vector<ExprPtr> args) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::series;
        e->args = std::move(args);
        return e;
    }
    static ExprPtr parallel(std::vector<ExprPtr> args) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::parallel;
        e->args = std::move(args);
        return e;
    }
    static ExprPtr k_out_of_n(int k, std::vector<ExprPtr> args) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::k_out_of_n;
        e->k = k;
        e->args = std::move(args);
        return e;
    }
};

inline bool evaluate(const Expr& e, std::uint32_t state) {
    switch (e.kind) {
        case Expr::Kind::component:
            return (state >> (e.id - 1)) & 1u;
        case Expr::Kind::series:
            for (const auto& a : e.args)
                if (!evaluate(*a, state)) return false;
            return true;
        case Expr::Kind::parallel:
            for (const auto& a : e.args)
                if (evaluate(*a, state)) return true;
            return false;
        case Expr::Kind::k_out_of_n: {
            int working = 0;
            for (const auto& a : e.args)
                if (evaluate(*a, state)) ++working;
            return working >= e.k;
        }
    }
    return false;
}

inline void to_string_impl(const Expr& e, std::string& out) {
    auto join = [&](const char* head) {
        out += head;
        out += '(';
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i > 0) out += ',';
            to_string_impl(*e.args[i], out);
        }
        out += ')';
    };
    switch (e.kind) {
        case Expr::Kind::component:
            out += std::to_string(e.id);
            break;
        case Expr::Kind::series:
            join("series");
            break;
        case Expr::Kind::parallel:
            join("parallel");
            break;
        case Expr::Kind::k_out_of_n:
            out += "koutofn(";
            out += std::to_string(e.k);
            out += ';';
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i > 0) out += ',';
                to_string_impl(*e.args[i], out);
            }
            out += ')';
            break;
    }
}

inline std::string to_string(const Expr& e) {
    std::string out;
    to_string_impl(e, out);
    return out;
}

inline void collect_components(const Expr& e, std::map<int, int>& counts) {
    if (e.kind == Expr::Kind::component) {
        ++counts[e.id];
        return;
    }
    for (const auto& a : e.args) collect_components(*a, counts);
}

/// Component ids that appear more than once in the expression.
inline std::vector<int> duplicate_components(const Expr& e) {
    std::map<int, int> counts;
    collect_components(e, counts);
    std::vector<int> dups;
    for (const auto& [id, c] : counts)
        if (c > 1) dups.push_back(id);
    return dups;
}

/// Substitutes every leaf with the given id by a replacement subtree.
inline ExprPtr substitute(const ExprPtr& e, int id, const ExprPtr& replacement) {
    if (e->kind == Expr::Kind::component)
        return e->id == id ? replacement : e;
    auto copy = std::make_shared<Expr>(*e);
    for (auto& a : copy->args) a = substitute(a, id, replacement);
    return copy;
}

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& message, std::size_t position)
        : std::runtime_error(message + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

namespace detail {

// Recursive-descent parser for
//   expr := INT | "series(" list ")" | "parallel(" list ")" | "koutofn(" INT ";" list ")"
//   list := expr ("," expr)*
class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    ExprPtr parse() {
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input '" + token_preview() + "'");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    std::string token_preview() const {
        std::size_t end = pos_;
        while (end < text_.size() && !std::isspace(static_cast<unsigned char>(text_[end])) &&
               end - pos_ < 12)
            ++end;
        return std::string(text_.substr(pos_, end - pos_));
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c))
            fail(std::string("expected '") + c + "', found '" + token_preview() + "'");
    }

    int parse_int() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == start) fail("expected integer, found '" + token_preview() + "'");
        long value = 0;
        for (std::size_t i = start; i < pos_; ++i) {
            value = value * 10 + (text_[i] - '0');
            if (value > 1'000'000) fail("integer too large");
        }
        return static_cast<int>(value);
    }

    std::vector<ExprPtr> parse_list() {
        std::vector<ExprPtr> args;
        args.push_back(parse_expr());
        while (consume(',')) args.push_back(parse_expr());
        return args;
    }

    ExprPtr parse_expr() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            int id = parse_int();
            if (id < 1) fail("component ids start at 1");
            return Expr::component(id);
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        std::string_view word = text_.substr(start, pos_ - start);
        if (word == "series" || word == "parallel") {
            expect('(');
            auto args = parse_list();
            expect(')');
            return word == "series" ? Expr::series(std::move(args))
                                    : Expr::parallel(std::move(args));
        }
        if (word == "koutofn") {
            expect('(');
            int k = parse_int();
            expect(';');
            auto args = parse_list();
            expect(')');
            if (k < 1 || static_cast<std::size_t>(k) > args.size()) {
                pos_ = start;
                fail("k out of range: k=" + std::to_string(k) + " with " +
                     std::to_string(args.size()) + " arguments");
            }
            return Expr::k_out_of_n(k, std::move(args));
        }
        pos_ = start;
        fail("expected 'series', 'parallel', 'koutofn' or a component id, found '" +
             token_preview() + "'");
    }
};

}  // namespace detail

inline ExprPtr parse_expression(std::string_view text) {
    return detail::ExprParser(text).parse();
}

// ---------------------------------------------------------------------------
// StructureFunction
// ---------------------------------------------------------------------------

class StructureFunction {
public:
    static constexpr int max_components = 24;

    StructureFunction(int n, std::vector<bool> table, ExprPtr expr = nullptr)
        : n_(n), table_(std::move(table)), expr_(std::move(expr)) {
        if (n_ < 1 || n_ > max_components)
            throw std::invalid_argument("component count must be in 1.." +
                                        std::to_string(max_components) + ", got " +
                                        std::to_string(n_));
        if (table_.size() != (std::size_t{1} << n_))
            throw std::invalid_argument("truth table must have 2^n entries");
    }

    static StructureFunction from_table(int n, std::vector<bool> table) {
        return StructureFunction(n, std::move(table));
    }

    static StructureFunction from_expr(const ExprPtr& expr) {
        std::map<int, int> counts;
        collect_components(*expr, counts);
        if (counts.empty()) throw std::invalid_argument("expression uses no components");
        int n = counts.rbegin()->first;
        if (n > max_components)
            throw std::invalid_argument("component count exceeds the supported maximum of " +
                                        std::to_string(max_components));
        for (int i = 1; i <= n; ++i)
            if (!counts.count(i))
                throw std::invalid_argument("component ids must be contiguous 1.." +
                                            std::to_string(n) + "; id " + std::to_string(i) +
                                            " is missing");
        const std::uint32_t states = std::uint32_t{1} << n;
        std::vector<bool> table(states);
        for (std::uint32_t s = 0; s < states; ++s) table[s] = evaluate(*expr, s);
        return StructureFunction(n, std::move(table), expr);
    }

    static StructureFunction from_expression(std::string_view text) {
        return from_expr(parse_expression(text));
    }

    int n() const { return n_; }
    std::uint32_t state_count() const { return std::uint32_t{1} << n_; }
    bool operator()(std::uint32_t state) const { return table_[state]; }
    const std::vector<bool>& table() const { return table_; }
    const ExprPtr& expression() const { return expr_; }

    bool operator==(const StructureFunction& other) const {
        return n_ == other.n_ && table_ == other.table_;
    }

private:
    int n_;
    std::vector<bool> table_;
    ExprPtr expr_;
};

// ---------------------------------------------------------------------------
// Structural queries
// ---------------------------------------------------------------------------

struct MonotonicityResult {
    bool monotone = true;
    // On failure: phi(state with component failed) = 1 > phi(state with component
    // working) = 0; `state` has the component bit cleared.
    int component = 0;
    std::uint32_t state = 0;
};

inline MonotonicityResult check_monotone(const StructureFunction& sf) {
    const std::uint32_t states = sf.state_count();
    for (int i = 1; i <= sf.n(); ++i) {
        const std::uint32_t bit = component_bit(i);
        for (std::uint32_t s = 0; s < states; ++s) {
            if (s & bit) continue;
            if (sf(s) && !sf(s | bit)) return {false, i, s};
        }
    }
    return {};
}

inline std::vector<int> irrelevant_components(const StructureFunction& sf) {
    std::vector<int> out;
    const std::uint32_t states = sf.state_count();
    for (int i = 1; i <= sf.n(); ++i) {
        const std::uint32_t bit = component_bit(i);
        bool irrelevant = true;
        for (std::uint32_t s = 0; s < states && irrelevant; ++s) {
            if (s & bit) continue;
            if (sf(s) != sf(s | bit)) irrelevant = false;
        }
        if (irrelevant) out.push_back(i);
    }
    return out;
}

inline bool is_coherent(const StructureFunction& sf) {
    return check_monotone(sf).monotone && irrelevant_components(sf).empty();
}

inline ExprPtr dual_expr(const ExprPtr& e) {
    if (!e) return nullptr;
    switch (e->kind) {
        case Expr::Kind::component:
            return e;
        case Expr::Kind::series:
        case Expr::Kind::parallel: {
            std::vector<ExprPtr> args;
            args.reserve(e->args.size());
            for (const auto& a : e->args) args.push_back(dual_expr(a));
            return e->kind == Expr::Kind::series ? Expr::parallel(std::move(args))
                                                 : Expr::series(std::move(args));
        }
        case Expr::Kind::k_out_of_n: {
            std::vector<ExprPtr> args;
            args.reserve(e->args.size());
            for (const auto& a : e->args) args.push_back(dual_expr(a));
            int m = static_cast<int>(args.size());
            return Expr::k_out_of_n(m - e->k + 1, std::move(args));
        }
    }
    return nullptr;
}

/// phi'(x) = 1 - phi(1 - x).
inline StructureFunction dual(const StructureFunction& sf) {
    const std::uint32_t states = sf.state_count();
    const std::uint32_t full = states - 1;
    std::vector<bool> table(states);
    for (std::uint32_t s = 0; s < states; ++s) table[s] = !sf(full & ~s);
    return StructureFunction(sf.n(), std::move(table), dual_expr(sf.expression()));
}

struct PathCutSets {
    std::vector<std::uint32_t> paths;  // minimal path sets, ascending mask order
    std::vector<std::uint32_t> cuts;   // minimal cut sets, ascending mask order
};

inline PathCutSets minimal_path_cut_sets(const StructureFunction& sf) {
    auto mono = check_monotone(sf);
    if (!mono.monotone)
        throw std::invalid_argument("minimal_path_cut_sets requires a coherent structure: "
                                    "not monotone in component " +
                                    std::to_string(mono.component));
    if (auto irr = irrelevant_components(sf); !irr.empty())
        throw std::invalid_argument("minimal_path_cut_sets requires a coherent structure: "
                                    "component " + std::to_string(irr.front()) +
                                    " is irrelevant");

    const std::uint32_t states = sf.state_count();
    const std::uint32_t full = states - 1;
    PathCutSets out;
    for (std::uint32_t s = 0; s < states; ++s) {
        // Minimal path: phi(1_S) = 1 and removing any member breaks it.
        if (sf(s)) {
            bool minimal = true;
            for (std::uint32_t m = s; m != 0 && minimal; m &= m - 1)
                if (sf(s & ~(m & -m))) minimal = false;
            if (minimal) out.paths.push_back(s);
        }
        // Minimal cut: phi(complement of S) = 0 and restoring any member repairs it.
        if (s != 0 && !sf(full & ~s)) {
            bool minimal = true;
            for (std::uint32_t m = s; m != 0 && minimal; m &= m - 1)
                if (!sf((full & ~s) | (m & -m))) minimal = false;
            if (minimal) out.cuts.push_back(s);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Signed domination (multilinear coefficients)
// ---------------------------------------------------------------------------

struct SignedDomination {
    int n = 0;
    // (subset mask, b_phi(S)) sorted by mask; zero coefficients omitted.
    std::vector<std::pair<std::uint32_t, std::int64_t>> coeffs;

    std::int64_t coefficient(std::uint32_t mask) const {
        auto it = std::lower_bound(coeffs.begin(), coeffs.end(), mask,
                                   [](const auto& p, std::uint32_t m) { return p.first < m; });
        return (it != coeffs.end() && it->first == mask) ? it->second : 0;
    }
};

// Subset Moebius transform of the truth table:
//   b(S) = sum over R subseteq S of (-1)^{|S \ R|} phi(1_R).
inline SignedDomination signed_domination(const StructureFunction& sf) {
    const std::uint32_t states = sf.state_count();
    std::vector<std::int32_t> work(states);
    for (std::uint32_t s = 0; s < states; ++s) work[s] = sf(s) ? 1 : 0;
    for (int b = 0; b < sf.n(); ++b) {
        const std::uint32_t bit = std::uint32_t{1} << b;
        for (std::uint32_t s = 0; s < states; ++s)
            if (s & bit) work[s] -= work[s ^ bit];
    }
    SignedDomination out;
    out.n = sf.n();
    for (std::uint32_t s = 0; s < states; ++s)
        if (work[s] != 0) out.coeffs.emplace_back(s, work[s]);
    return out;
}

}  // namespace relimp
