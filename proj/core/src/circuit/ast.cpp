#include "zkit/circuit/ast.hpp"

#include <algorithm>
#include <queue>

namespace zkit::circuit {

std::string_view visibility_name(Visibility v) {
  switch (v) {
    case Visibility::kPublicInput: return "public-input";
    case Visibility::kPrivateInput: return "private-input";
    case Visibility::kInternal: return "internal";
    case Visibility::kOutput: return "output";
  }
  return "?";
}

bool is_input(Visibility v) {
  return v == Visibility::kPublicInput || v == Visibility::kPrivateInput;
}

bool is_hint_builtin(std::string_view name) {
  return name == "bit" || name == "idiv" || name == "imod";
}

// ---------------------------------------------------------------------------

LinearCombination LinearCombination::constant(const FieldElement& c) {
  LinearCombination lc(c.field());
  lc.constant_ = c;
  return lc;
}

LinearCombination LinearCombination::signal(const PrimeField& f, std::size_t index) {
  LinearCombination lc(f);
  lc.terms_.push_back({index, f.one()});
  return lc;
}

void LinearCombination::add_term(std::size_t signal, const FieldElement& coeff) {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), signal,
                             [](const Term& t, std::size_t s) { return t.signal < s; });
  if (it != terms_.end() && it->signal == signal) {
    it->coeff += coeff;
    if (it->coeff.is_zero()) terms_.erase(it);
  } else if (!coeff.is_zero()) {
    terms_.insert(it, Term{signal, coeff});
  }
}

void LinearCombination::add_scaled(const LinearCombination& other, const FieldElement& scale) {
  if (scale.is_zero()) return;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->signal < b->signal)) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || b->signal < a->signal) {
      merged.push_back({b->signal, b->coeff * scale});
      ++b;
    } else {
      FieldElement c = a->coeff + b->coeff * scale;
      if (!c.is_zero()) merged.push_back({a->signal, c});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  constant_ += other.constant_ * scale;
}

LinearCombination& LinearCombination::operator+=(const LinearCombination& o) {
  add_scaled(o, field().one());
  return *this;
}

LinearCombination& LinearCombination::operator-=(const LinearCombination& o) {
  add_scaled(o, -field().one());
  return *this;
}

LinearCombination& LinearCombination::operator*=(const FieldElement& c) {
  if (c.is_zero()) {
    terms_.clear();
    constant_ = c;
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  constant_ *= c;
  return *this;
}

FieldElement LinearCombination::evaluate(
    std::span<const std::optional<FieldElement>> values) const {
  FieldElement acc = constant_;
  for (const auto& t : terms_) acc += t.coeff * *values[t.signal];
  return acc;
}

FieldElement Quadratic::evaluate(std::span<const std::optional<FieldElement>> values) const {
  FieldElement acc = linear.evaluate(values);
  if (product) acc += product->first.evaluate(values) * product->second.evaluate(values);
  return acc;
}

void Quadratic::for_each_signal(const std::function<void(std::size_t)>& fn) const {
  for (const auto& t : linear.terms()) fn(t.signal);
  if (product) {
    for (const auto& t : product->first.terms()) fn(t.signal);
    for (const auto& t : product->second.terms()) fn(t.signal);
  }
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> CircuitAst::find_signal(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t CircuitAst::count_statements_of_kind(std::size_t variant_index) const {
  return static_cast<std::size_t>(
      std::count_if(statements_.begin(), statements_.end(),
                    [&](const Statement& s) { return s.index() == variant_index; }));
}

const TemplateFn* TemplateRegistry::find(std::string_view name) const {
  auto it = templates_.find(name);
  return it == templates_.end() ? nullptr : &it->second;
}

std::vector<std::string> TemplateRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : templates_) out.push_back(name);
  return out;
}

// ---------------------------------------------------------------------------

CircuitBuilder::CircuitBuilder(const PrimeField& f) : field_(&f) { ast_.field_ = &f; }

CircuitBuilder::ScopeGuard CircuitBuilder::scope(std::string name) {
  scopes_.push_back(std::move(name));
  return ScopeGuard(this);
}

std::string CircuitBuilder::qualify(std::string_view local) const {
  std::string out;
  for (const auto& s : scopes_) {
    out += s;
    out += '.';
  }
  out += local;
  return out;
}

std::size_t CircuitBuilder::declare(std::string_view local, Visibility v, SourceLocation where) {
  return declare_qualified(qualify(local), v, where);
}

std::size_t CircuitBuilder::declare_qualified(std::string name, Visibility v,
                                              SourceLocation where) {
  if (ast_.by_name_.contains(name)) {
    throw Error(Errc::kSyntaxError, "signal '" + name + "' declared twice", where);
  }
  const std::size_t index = ast_.signals_.size();
  ast_.by_name_.emplace(name, index);
  ast_.signals_.push_back({std::move(name), v, where});
  assigned_by_.emplace_back();
  return index;
}

std::optional<std::size_t> CircuitBuilder::find(std::string_view qualified) const {
  return ast_.find_signal(qualified);
}

namespace {

void check_lc_field(const PrimeField& f, const LinearCombination& lc) {
  if (&lc.field() != &f) throw Error(Errc::kModulusMismatch, "expression over a different field");
}

void check_quadratic_field(const PrimeField& f, const Quadratic& q) {
  check_lc_field(f, q.linear);
  if (q.product) {
    check_lc_field(f, q.product->first);
    check_lc_field(f, q.product->second);
  }
}

}  // namespace

void CircuitBuilder::assign(std::size_t target, Quadratic rhs, SourceLocation where) {
  check_quadratic_field(*field_, rhs);
  const auto& decl = ast_.signals_.at(target);
  if (is_input(decl.visibility)) {
    throw Error(Errc::kDoubleAssignment, "input signal '" + decl.name + "' cannot be assigned",
                where);
  }
  if (assigned_by_[target]) {
    throw Error(Errc::kDoubleAssignment, "signal '" + decl.name + "' assigned twice", where);
  }
  assigned_by_[target] = ast_.statements_.size();
  ast_.statements_.emplace_back(Assignment{target, std::move(rhs), where});
}

void CircuitBuilder::assert_equal(Quadratic lhs, Quadratic rhs, SourceLocation where) {
  check_quadratic_field(*field_, lhs);
  check_quadratic_field(*field_, rhs);
  ast_.statements_.emplace_back(Assertion{std::move(lhs), std::move(rhs), where});
}

void CircuitBuilder::hint(std::size_t target, std::string builtin,
                          std::vector<LinearCombination> args, SourceLocation where) {
  if (!is_hint_builtin(builtin)) {
    throw Error(Errc::kSyntaxError, "unknown hint function '" + builtin + "'", where);
  }
  for (const auto& a : args) check_lc_field(*field_, a);
  const auto& decl = ast_.signals_.at(target);
  if (is_input(decl.visibility)) {
    throw Error(Errc::kDoubleAssignment, "input signal '" + decl.name + "' cannot be assigned",
                where);
  }
  if (assigned_by_[target]) {
    throw Error(Errc::kDoubleAssignment, "signal '" + decl.name + "' assigned twice", where);
  }
  assigned_by_[target] = ast_.statements_.size();
  ast_.statements_.emplace_back(Hint{target, std::move(builtin), std::move(args), where});
}

LinearCombination CircuitBuilder::mul(std::string_view local, const LinearCombination& a,
                                      const LinearCombination& b, SourceLocation where) {
  std::size_t s = declare(local, Visibility::kInternal, where);
  assign(s, Quadratic(a, b, LinearCombination(*field_)), where);
  return signal(s);
}

LinearCombination CircuitBuilder::hinted(std::string_view local, std::string builtin,
                                         std::vector<LinearCombination> args,
                                         SourceLocation where) {
  std::size_t s = declare(local, Visibility::kInternal, where);
  hint(s, std::move(builtin), std::move(args), where);
  return signal(s);
}

void CircuitBuilder::assert_bit(const LinearCombination& x, SourceLocation where) {
  // x * (1 - x) = 0
  assert_equal(Quadratic(x, lc(1) - x, LinearCombination(*field_)),
               Quadratic(LinearCombination(*field_)), where);
}

CircuitAst CircuitBuilder::finish() && {
  const auto& signals = ast_.signals_;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (!is_input(signals[i].visibility) && !assigned_by_[i]) {
      throw Error(Errc::kUnassignedSignal, "signal '" + signals[i].name + "' is never assigned",
                  signals[i].location);
    }
  }

  // Kahn's algorithm over assignment/hint statements, smallest index first.
  const auto& stmts = ast_.statements_;
  std::vector<std::size_t> indegree(stmts.size(), 0);
  std::vector<std::vector<std::size_t>> dependents(stmts.size());
  auto deps_of = [&](std::size_t k, const std::function<void(std::size_t)>& fn) {
    if (const auto* a = std::get_if<Assignment>(&stmts[k])) {
      a->rhs.for_each_signal(fn);
    } else if (const auto* h = std::get_if<Hint>(&stmts[k])) {
      for (const auto& arg : h->args) {
        for (const auto& t : arg.terms()) fn(t.signal);
      }
    }
  };
  std::size_t producers = 0;
  for (std::size_t k = 0; k < stmts.size(); ++k) {
    if (std::holds_alternative<Assertion>(stmts[k])) continue;
    ++producers;
    deps_of(k, [&](std::size_t sig) {
      if (auto src = assigned_by_[sig]) {
        dependents[*src].push_back(k);
        ++indegree[k];
      }
    });
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t k = 0; k < stmts.size(); ++k) {
    if (!std::holds_alternative<Assertion>(stmts[k]) && indegree[k] == 0) ready.push(k);
  }
  ast_.order_.clear();
  ast_.order_.reserve(producers);
  while (!ready.empty()) {
    std::size_t k = ready.top();
    ready.pop();
    ast_.order_.push_back(k);
    for (std::size_t d : dependents[k]) {
      if (--indegree[d] == 0) ready.push(d);
    }
  }
  if (ast_.order_.size() != producers) {
    for (std::size_t k = 0; k < stmts.size(); ++k) {
      if (std::holds_alternative<Assertion>(stmts[k]) || indegree[k] == 0) continue;
      std::size_t target = 0;
      SourceLocation where;
      if (const auto* a = std::get_if<Assignment>(&stmts[k])) {
        target = a->target;
        where = a->location;
      } else {
        const auto& h = std::get<Hint>(stmts[k]);
        target = h.target;
        where = h.location;
      }
      throw Error(Errc::kCyclicDependency,
                  "signal '" + signals[target].name + "' depends on itself", where);
    }
  }
  return std::move(ast_);
}

}  // namespace zkit::circuit
