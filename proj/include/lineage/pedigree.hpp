#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lineage/genealogy.hpp"

namespace lineage {

/// A construction recipe over the seed points: either a seed leaf (1-based
/// index) or the child of two same-gender sub-recipes.  Shared subtrees are
/// fine (the ledger produces DAGs), so nodes are immutable and refcounted.
struct PedigreeExpr {
    Gender gender = Gender::Point;
    std::uint32_t adam = 0;  // > 0 means leaf
    std::shared_ptr<const PedigreeExpr> left;
    std::shared_ptr<const PedigreeExpr> right;

    bool is_leaf() const { return adam > 0; }
};

using ExprPtr = std::shared_ptr<const PedigreeExpr>;

inline ExprPtr adam_expr(std::uint32_t index) {
    if (index == 0) throw ParseError("seed indices are 1-based");
    auto node = std::make_shared<PedigreeExpr>();
    node->gender = Gender::Point;
    node->adam = index;
    return node;
}

inline ExprPtr child_expr(ExprPtr a, ExprPtr b) {
    if (!a || !b) throw ParseError("child of empty pedigree");
    if (a->gender != b->gender) throw ParseError("child of mixed-gender pedigrees");
    auto node = std::make_shared<PedigreeExpr>();
    node->gender = opposite(a->gender);
    node->left = std::move(a);
    node->right = std::move(b);
    return node;
}

inline bool expr_equal(const PedigreeExpr& a, const PedigreeExpr& b) {
    if (a.is_leaf() != b.is_leaf() || a.gender != b.gender) return false;
    if (a.is_leaf()) return a.adam == b.adam;
    return expr_equal(*a.left, *b.left) && expr_equal(*a.right, *b.right);
}

/// Renders in the genealogical notation: Adam_i for seeds, Eve_{i,j} for a
/// line joining two seeds, otherwise SonOf(x,y) / DaughterOf(x,y).
inline void render_to(const PedigreeExpr& e, std::string& out) {
    if (e.is_leaf()) {
        out += "Adam_";
        out += std::to_string(e.adam);
        return;
    }
    if (e.gender == Gender::Line && e.left->is_leaf() && e.right->is_leaf()) {
        out += "Eve_{";
        out += std::to_string(e.left->adam);
        out += ',';
        out += std::to_string(e.right->adam);
        out += '}';
        return;
    }
    out += e.gender == Gender::Point ? "SonOf(" : "DaughterOf(";
    render_to(*e.left, out);
    out += ',';
    render_to(*e.right, out);
    out += ')';
}

inline std::string render(const PedigreeExpr& e) {
    std::string out;
    render_to(e, out);
    return out;
}

inline std::string render(const ExprPtr& e) {
    if (!e) throw ParseError("render of empty pedigree");
    return render(*e);
}

namespace detail {

struct PedigreeParser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool consume(std::string_view token) {
        skip_ws();
        if (text.substr(pos, token.size()) != token) return false;
        pos += token.size();
        return true;
    }

    void expect(std::string_view token) {
        if (!consume(token)) {
            throw ParseError("expected '" + std::string(token) + "' at offset " + std::to_string(pos) +
                             " in pedigree '" + std::string(text) + "'");
        }
    }

    std::uint32_t integer() {
        skip_ws();
        std::size_t start = pos;
        std::uint64_t value = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            value = value * 10 + static_cast<std::uint64_t>(text[pos] - '0');
            if (value > 1'000'000) throw ParseError("seed index out of range");
            ++pos;
        }
        if (pos == start) throw ParseError("expected integer at offset " + std::to_string(pos));
        return static_cast<std::uint32_t>(value);
    }

    ExprPtr pair_of(Gender operand_gender) {
        expect("(");
        ExprPtr a = expr();
        expect(",");
        ExprPtr b = expr();
        expect(")");
        if (a->gender != operand_gender || b->gender != operand_gender) {
            throw ParseError("operand gender mismatch in pedigree '" + std::string(text) + "'");
        }
        return child_expr(std::move(a), std::move(b));
    }

    ExprPtr expr() {
        skip_ws();
        if (consume("Adam_")) return adam_expr(integer());
        if (consume("Eve_{")) {
            const std::uint32_t i = integer();
            expect(",");
            const std::uint32_t j = integer();
            expect("}");
            return child_expr(adam_expr(i), adam_expr(j));
        }
        if (consume("SonOf")) return pair_of(Gender::Line);
        if (consume("DaughterOf")) return pair_of(Gender::Point);
        throw ParseError("unrecognized pedigree at offset " + std::to_string(pos) + " in '" +
                         std::string(text) + "'");
    }
};

} // namespace detail

inline ExprPtr parse_pedigree(std::string_view text) {
    detail::PedigreeParser p{text};
    ExprPtr e = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) {
        throw ParseError("trailing characters after pedigree '" + std::string(text) + "'");
    }
    return e;
}

/// Evaluates a recipe against concrete seed points.
template <class S>
GeomObject<S> evaluate(const PedigreeExpr& e, const std::vector<GeomObject<S>>& adams) {
    if (e.is_leaf()) {
        if (e.adam > adams.size()) {
            throw ParseError("pedigree uses Adam_" + std::to_string(e.adam) + " but only " +
                             std::to_string(adams.size()) + " seeds exist");
        }
        return adams[e.adam - 1];
    }
    return child(evaluate(*e.left, adams), evaluate(*e.right, adams));
}

template <class S>
GeomObject<S> evaluate(const ExprPtr& e, const std::vector<GeomObject<S>>& adams) {
    if (!e) throw ParseError("evaluate of empty pedigree");
    return evaluate(*e, adams);
}

/// Applies a 1-based seed relabeling to every leaf.
inline ExprPtr permute_adams(const PedigreeExpr& e, const std::vector<std::uint32_t>& perm) {
    if (e.is_leaf()) {
        if (e.adam > perm.size()) throw ParseError("permutation too short for pedigree");
        return adam_expr(perm[e.adam - 1]);
    }
    return child_expr(permute_adams(*e.left, perm), permute_adams(*e.right, perm));
}

/// Recipe DAGs for the first `count` ledger objects, indexed by id.
/// Origins only reference smaller ids, so one ascending pass suffices.
template <class S>
std::vector<ExprPtr> build_pedigree_memo(const Ledger<S>& ledger, std::size_t count) {
    std::vector<ExprPtr> memo(count);
    for (ObjectId i = 0; i < count; ++i) {
        const auto& rec = ledger.record(i);
        if (rec.origin.is_leaf()) {
            memo[i] = adam_expr(rec.origin.adam);
        } else {
            memo[i] = child_expr(memo[rec.origin.parents.a], memo[rec.origin.parents.b]);
        }
    }
    return memo;
}

template <class S>
std::vector<ExprPtr> build_pedigree_memo(const Ledger<S>& ledger) {
    return build_pedigree_memo(ledger, ledger.size());
}

/// First-recorded construction of a ledger object as a recipe DAG.
template <class S>
ExprPtr pedigree_expr(const Ledger<S>& ledger, ObjectId id) {
    if (id >= ledger.size()) throw UnknownId("no object with id " + std::to_string(id));
    std::vector<ExprPtr> memo(static_cast<std::size_t>(id) + 1);
    for (ObjectId i = 0; i <= id; ++i) {
        const auto& rec = ledger.record(i);
        if (rec.origin.is_leaf()) {
            memo[i] = adam_expr(rec.origin.adam);
        } else {
            memo[i] = child_expr(memo[rec.origin.parents.a], memo[rec.origin.parents.b]);
        }
    }
    return memo[id];
}

template <class S>
std::string render_pedigree(const Ledger<S>& ledger, ObjectId id) {
    return render(pedigree_expr(ledger, id));
}

} // namespace lineage
