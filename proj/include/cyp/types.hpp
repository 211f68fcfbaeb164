#pragma once

#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cyp/span.hpp"

namespace cyp {

// Monotypes. Var is a unification variable or a lemma's type variable as
// written; Rigid is a lemma-local type variable frozen for the duration of
// that lemma's own proof (it unifies only with itself). Con covers both
// declared datatypes and abstract type constructors that have no data
// declaration (those cannot be case-analyzed).
struct Type;
using TypePtr = std::shared_ptr<const Type>;

enum class TypeKind { Var, Rigid, Con, Fun };

struct Type {
    TypeKind kind;
    std::string name;            // Var, Rigid, Con
    std::vector<TypePtr> args;   // Con
    TypePtr from, to;            // Fun
    MaybeSpan span;
};

inline TypePtr tvar(std::string name, MaybeSpan span = {}) {
    return std::make_shared<Type>(Type{TypeKind::Var, std::move(name), {}, nullptr, nullptr, span});
}
inline TypePtr trigid(std::string name, MaybeSpan span = {}) {
    return std::make_shared<Type>(Type{TypeKind::Rigid, std::move(name), {}, nullptr, nullptr, span});
}
inline TypePtr tcon(std::string name, std::vector<TypePtr> args = {}, MaybeSpan span = {}) {
    return std::make_shared<Type>(Type{TypeKind::Con, std::move(name), std::move(args), nullptr, nullptr, span});
}
inline TypePtr tfun(TypePtr from, TypePtr to, MaybeSpan span = {}) {
    return std::make_shared<Type>(Type{TypeKind::Fun, {}, {}, std::move(from), std::move(to), span});
}

// Structural equality; spans are diagnostic-only.
inline bool type_equal(const TypePtr& a, const TypePtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case TypeKind::Var:
        case TypeKind::Rigid:
            return a->name == b->name;
        case TypeKind::Con: {
            if (a->name != b->name || a->args.size() != b->args.size()) return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!type_equal(a->args[i], b->args[i])) return false;
            return true;
        }
        case TypeKind::Fun:
            return type_equal(a->from, b->from) && type_equal(a->to, b->to);
    }
    return false;
}

// Equality up to a consistent renaming of type variables, threaded through
// `fwd`/`bwd`. Rigid variables compare by name, flexible ones by bijection.
inline bool type_alpha_equal(const TypePtr& a, const TypePtr& b,
                             std::map<std::string, std::string>& fwd,
                             std::map<std::string, std::string>& bwd) {
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case TypeKind::Var: {
            auto f = fwd.find(a->name);
            auto g = bwd.find(b->name);
            if (f == fwd.end() && g == bwd.end()) {
                fwd[a->name] = b->name;
                bwd[b->name] = a->name;
                return true;
            }
            return f != fwd.end() && g != bwd.end() && f->second == b->name && g->second == a->name;
        }
        case TypeKind::Rigid:
            return a->name == b->name;
        case TypeKind::Con: {
            if (a->name != b->name || a->args.size() != b->args.size()) return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!type_alpha_equal(a->args[i], b->args[i], fwd, bwd)) return false;
            return true;
        }
        case TypeKind::Fun:
            return type_alpha_equal(a->from, b->from, fwd, bwd) &&
                   type_alpha_equal(a->to, b->to, fwd, bwd);
    }
    return false;
}

// Replace Var nodes through `f`; other structure rebuilt as needed.
template <typename F>
TypePtr map_type_vars(const TypePtr& t, F&& f) {
    if (!t) return t;
    switch (t->kind) {
        case TypeKind::Var:
            return f(*t);
        case TypeKind::Rigid:
            return t;
        case TypeKind::Con: {
            std::vector<TypePtr> args;
            args.reserve(t->args.size());
            bool changed = false;
            for (const auto& a : t->args) {
                TypePtr a2 = map_type_vars(a, f);
                changed = changed || a2 != a;
                args.push_back(std::move(a2));
            }
            if (!changed) return t;
            return tcon(t->name, std::move(args), t->span);
        }
        case TypeKind::Fun: {
            TypePtr from = map_type_vars(t->from, f);
            TypePtr to = map_type_vars(t->to, f);
            if (from == t->from && to == t->to) return t;
            return tfun(std::move(from), std::move(to), t->span);
        }
    }
    return t;
}

inline void collect_type_vars(const TypePtr& t, std::set<std::string>& out) {
    if (!t) return;
    switch (t->kind) {
        case TypeKind::Var: out.insert(t->name); break;
        case TypeKind::Rigid: break;
        case TypeKind::Con:
            for (const auto& a : t->args) collect_type_vars(a, out);
            break;
        case TypeKind::Fun:
            collect_type_vars(t->from, out);
            collect_type_vars(t->to, out);
            break;
    }
}

inline std::set<std::string> free_type_vars(const TypePtr& t) {
    std::set<std::string> s;
    collect_type_vars(t, s);
    return s;
}

// Freeze a lemma's own type variables for the scope of its proof.
inline TypePtr rigidify(const TypePtr& t) {
    return map_type_vars(t, [](const Type& v) { return trigid(v.name, v.span); });
}

// Thaw again: rules derived inside a rigid scope are polymorphic outside it.
inline TypePtr unrigidify(const TypePtr& t) {
    if (!t) return t;
    switch (t->kind) {
        case TypeKind::Var:
            return t;
        case TypeKind::Rigid:
            return tvar(t->name, t->span);
        case TypeKind::Con: {
            std::vector<TypePtr> args;
            args.reserve(t->args.size());
            for (const auto& a : t->args) args.push_back(unrigidify(a));
            return tcon(t->name, std::move(args), t->span);
        }
        case TypeKind::Fun:
            return tfun(unrigidify(t->from), unrigidify(t->to), t->span);
    }
    return t;
}

inline std::string show_type(const TypePtr& t);

namespace detail {
inline std::string show_type_atom(const TypePtr& t) {
    if (t && (t->kind == TypeKind::Fun || (t->kind == TypeKind::Con && !t->args.empty())))
        return "(" + show_type(t) + ")";
    return show_type(t);
}
} // namespace detail

inline std::string show_type(const TypePtr& t) {
    if (!t) return "?";
    switch (t->kind) {
        case TypeKind::Var:
        case TypeKind::Rigid:
            return t->name;
        case TypeKind::Con: {
            std::string s = t->name;
            for (const auto& a : t->args) s += " " + detail::show_type_atom(a);
            return s;
        }
        case TypeKind::Fun: {
            std::string lhs = t->from && t->from->kind == TypeKind::Fun
                                  ? "(" + show_type(t->from) + ")"
                                  : show_type(t->from);
            return lhs + " -> " + show_type(t->to);
        }
    }
    return "?";
}

// A type with an explicit universal quantifier prefix.
struct Scheme {
    std::vector<std::string> vars;
    TypePtr body;
};

} // namespace cyp
