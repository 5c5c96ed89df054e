#include "kger/fol.hpp"

#include <algorithm>

namespace kger {

std::string render(const Element& e) {
    if (const auto* id = std::get_if<NodeId>(&e)) return id->id;
    return std::get<Value>(e).render();
}

std::string render(const Tuple& t) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i > 0) out += ", ";
        out += render(t[i]);
    }
    return out + ")";
}

FolFormula FolFormula::mkTrue() { return FolFormula{}; }

FolFormula FolFormula::mkFalse() {
    FolFormula f;
    f.kind = Kind::False;
    return f;
}

FolFormula FolFormula::classAtom(std::string predicate, std::string var) {
    FolFormula f;
    f.kind = Kind::ClassAtom;
    f.predicate = std::move(predicate);
    f.vars = {std::move(var)};
    return f;
}

FolFormula FolFormula::binAtom(std::string predicate, std::string left, std::string right) {
    FolFormula f;
    f.kind = Kind::BinAtom;
    f.predicate = std::move(predicate);
    f.vars = {std::move(left), std::move(right)};
    return f;
}

FolFormula FolFormula::equal(std::string left, std::string right) {
    FolFormula f;
    f.kind = Kind::Equal;
    f.vars = {std::move(left), std::move(right)};
    return f;
}

FolFormula FolFormula::conj(std::vector<FolFormula> parts) {
    std::vector<FolFormula> flat;
    for (auto& p : parts) {
        if (p.kind == Kind::True) continue;
        if (p.kind == Kind::And) {
            for (auto& c : p.children) flat.push_back(std::move(c));
        } else {
            flat.push_back(std::move(p));
        }
    }
    if (flat.empty()) return mkTrue();
    if (flat.size() == 1) return flat.front();
    FolFormula f;
    f.kind = Kind::And;
    f.children = std::move(flat);
    return f;
}

FolFormula FolFormula::disj(std::vector<FolFormula> parts) {
    std::vector<FolFormula> flat;
    for (auto& p : parts) {
        if (p.kind == Kind::False) continue;
        if (p.kind == Kind::Or) {
            for (auto& c : p.children) flat.push_back(std::move(c));
        } else {
            flat.push_back(std::move(p));
        }
    }
    if (flat.empty()) return mkFalse();
    if (flat.size() == 1) return flat.front();
    FolFormula f;
    f.kind = Kind::Or;
    f.children = std::move(flat);
    return f;
}

FolFormula FolFormula::implies(FolFormula antecedent, FolFormula consequent) {
    FolFormula f;
    f.kind = Kind::Implies;
    f.children = {std::move(antecedent), std::move(consequent)};
    return f;
}

FolFormula FolFormula::exists(std::vector<std::string> vars, FolFormula body) {
    if (vars.empty()) return body;
    FolFormula f;
    f.kind = Kind::Exists;
    f.vars = std::move(vars);
    f.children = {std::move(body)};
    return f;
}

FolFormula FolFormula::forall(std::vector<std::string> vars, FolFormula body) {
    if (vars.empty()) return body;
    FolFormula f;
    f.kind = Kind::Forall;
    f.vars = std::move(vars);
    f.children = {std::move(body)};
    return f;
}

namespace {

void collectFree(const FolFormula& f, std::set<std::string>& bound,
                 std::vector<std::string>& out, std::set<std::string>& seen) {
    switch (f.kind) {
        case FolFormula::Kind::True:
        case FolFormula::Kind::False:
            return;
        case FolFormula::Kind::ClassAtom:
        case FolFormula::Kind::BinAtom:
        case FolFormula::Kind::Equal:
            for (const auto& v : f.vars) {
                if (bound.count(v) == 0 && seen.insert(v).second) out.push_back(v);
            }
            return;
        case FolFormula::Kind::And:
        case FolFormula::Kind::Or:
        case FolFormula::Kind::Implies:
            for (const auto& c : f.children) collectFree(c, bound, out, seen);
            return;
        case FolFormula::Kind::Exists:
        case FolFormula::Kind::Forall: {
            std::vector<std::string> added;
            for (const auto& v : f.vars) {
                if (bound.insert(v).second) added.push_back(v);
            }
            collectFree(f.children.front(), bound, out, seen);
            for (const auto& v : added) bound.erase(v);
            return;
        }
    }
}

std::string joinVars(const std::vector<std::string>& vars) {
    std::string out;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i > 0) out += ", ";
        out += vars[i];
    }
    return out;
}

// Precedence: quantifiers/implies lowest, or, and, atoms highest.
std::string renderPrec(const FolFormula& f, int parentPrec) {
    auto wrap = [&](const std::string& s, int prec) {
        return prec < parentPrec ? "(" + s + ")" : s;
    };
    switch (f.kind) {
        case FolFormula::Kind::True:
            return "true";
        case FolFormula::Kind::False:
            return "false";
        case FolFormula::Kind::ClassAtom:
            return f.predicate + "(" + f.vars[0] + ")";
        case FolFormula::Kind::BinAtom:
            return f.predicate + "(" + f.vars[0] + ", " + f.vars[1] + ")";
        case FolFormula::Kind::Equal:
            return f.vars[0] + " = " + f.vars[1];
        case FolFormula::Kind::And: {
            std::string out;
            for (std::size_t i = 0; i < f.children.size(); ++i) {
                if (i > 0) out += " ∧ ";
                out += renderPrec(f.children[i], 3);
            }
            return wrap(out, 2);
        }
        case FolFormula::Kind::Or: {
            std::string out;
            for (std::size_t i = 0; i < f.children.size(); ++i) {
                if (i > 0) out += " ∨ ";
                out += renderPrec(f.children[i], 2);
            }
            return wrap(out, 1);
        }
        case FolFormula::Kind::Implies:
            return wrap(renderPrec(f.children[0], 1) + " ⇒ " + renderPrec(f.children[1], 0),
                        0);
        case FolFormula::Kind::Exists:
            return wrap("∃" + joinVars(f.vars) + ". " + renderPrec(f.children[0], 0), 0);
        case FolFormula::Kind::Forall:
            return wrap("∀" + joinVars(f.vars) + ". " + renderPrec(f.children[0], 0), 0);
    }
    return "";
}

struct Evaluator {
    const KnowledgeGraph& graph;
    const std::vector<Element>& domain;

    const Element& lookup(const Assignment& env, const std::string& var) const {
        auto it = env.find(var);
        if (it == env.end()) {
            throw Error("UNSUPPORTED-FORMULA", "unbound variable: " + var);
        }
        return it->second;
    }

    bool holds(const FolFormula& f, Assignment& env) const {
        switch (f.kind) {
            case FolFormula::Kind::True:
                return true;
            case FolFormula::Kind::False:
                return false;
            case FolFormula::Kind::ClassAtom: {
                const Element& e = lookup(env, f.vars[0]);
                const auto* id = std::get_if<NodeId>(&e);
                if (id == nullptr) return false;
                return graph.isEntityInstanceOf(id->id, f.predicate) ||
                       graph.isRelInstanceOf(id->id, f.predicate);
            }
            case FolFormula::Kind::BinAtom: {
                const Element& left = lookup(env, f.vars[0]);
                const Element& right = lookup(env, f.vars[1]);
                const auto* leftId = std::get_if<NodeId>(&left);
                if (leftId == nullptr) return false;
                if (const auto* value = std::get_if<Value>(&right)) {
                    // Attribute atom A(x, v).
                    for (const auto& fact : graph.attrFacts) {
                        if (fact.owner == leftId->id && fact.attribute == f.predicate &&
                            fact.value == *value) {
                            return true;
                        }
                    }
                    return false;
                }
                // Role atom B(r, e).
                const auto& rightId = std::get<NodeId>(right);
                for (const auto& fact : graph.roleFacts) {
                    if (fact.rel == leftId->id && fact.role == f.predicate &&
                        fact.target == rightId.id) {
                        return true;
                    }
                }
                return false;
            }
            case FolFormula::Kind::Equal:
                return lookup(env, f.vars[0]) == lookup(env, f.vars[1]);
            case FolFormula::Kind::And:
                return std::all_of(f.children.begin(), f.children.end(),
                                   [&](const FolFormula& c) { return holds(c, env); });
            case FolFormula::Kind::Or:
                return std::any_of(f.children.begin(), f.children.end(),
                                   [&](const FolFormula& c) { return holds(c, env); });
            case FolFormula::Kind::Implies:
                return !holds(f.children[0], env) || holds(f.children[1], env);
            case FolFormula::Kind::Exists:
                return quantify(f, env, /*existential=*/true, 0);
            case FolFormula::Kind::Forall:
                return quantify(f, env, /*existential=*/false, 0);
        }
        return false;
    }

    bool quantify(const FolFormula& f, Assignment& env, bool existential,
                  std::size_t index) const {
        if (index == f.vars.size()) {
            return holds(f.children.front(), env);
        }
        const std::string& var = f.vars[index];
        auto outer = env.find(var);
        std::optional<Element> saved;
        if (outer != env.end()) saved = outer->second;
        for (const Element& e : domain) {
            env[var] = e;
            bool inner = quantify(f, env, existential, index + 1);
            if (existential && inner) {
                restore(env, var, saved);
                return true;
            }
            if (!existential && !inner) {
                restore(env, var, saved);
                return false;
            }
        }
        restore(env, var, saved);
        return !existential;
    }

    static void restore(Assignment& env, const std::string& var,
                        const std::optional<Element>& saved) {
        if (saved.has_value()) {
            env[var] = *saved;
        } else {
            env.erase(var);
        }
    }
};

} // namespace

std::vector<std::string> FolFormula::freeVariables() const {
    std::set<std::string> bound;
    std::set<std::string> seen;
    std::vector<std::string> out;
    collectFree(*this, bound, out, seen);
    return out;
}

std::string FolFormula::render() const { return renderPrec(*this, 0); }

std::vector<Element> activeDomain(const KnowledgeGraph& graph) {
    std::vector<Element> domain;
    for (const auto& id : graph.entityIds) domain.push_back(NodeId{id});
    for (const auto& id : graph.relIds) domain.push_back(NodeId{id});
    std::vector<Value> values;
    for (const auto& fact : graph.attrFacts) values.push_back(fact.value);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (auto& v : values) domain.push_back(std::move(v));
    return domain;
}

std::set<Assignment> evalFormula(const KnowledgeGraph& graph, const FolFormula& formula,
                                 const Assignment& binding) {
    std::vector<Element> domain = activeDomain(graph);
    Evaluator evaluator{graph, domain};

    std::vector<std::string> toEnumerate;
    for (const auto& v : formula.freeVariables()) {
        if (binding.count(v) == 0) toEnumerate.push_back(v);
    }

    std::set<Assignment> results;
    Assignment env = binding;
    // Depth-first enumeration of the unbound free variables.
    std::vector<std::size_t> choice(toEnumerate.size(), 0);
    std::size_t level = 0;
    if (toEnumerate.empty()) {
        if (evaluator.holds(formula, env)) results.insert(env);
        return results;
    }
    if (domain.empty()) return results;
    while (true) {
        if (level == toEnumerate.size()) {
            if (evaluator.holds(formula, env)) results.insert(env);
            // backtrack
            while (level > 0) {
                --level;
                if (++choice[level] < domain.size()) break;
            }
            if (choice[level] >= domain.size()) break;
            env[toEnumerate[level]] = domain[choice[level]];
            ++level;
            for (std::size_t i = level; i < toEnumerate.size(); ++i) choice[i] = 0;
            continue;
        }
        env[toEnumerate[level]] = domain[choice[level]];
        ++level;
    }
    return results;
}

bool satisfies(const KnowledgeGraph& graph, const FolFormula& formula,
               const Assignment& binding) {
    std::vector<Element> domain = activeDomain(graph);
    Evaluator evaluator{graph, domain};
    Assignment env = binding;
    return evaluator.holds(formula, env);
}

} // namespace kger
