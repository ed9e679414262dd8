#include "zkit/circuit/r1cs.hpp"

#include <algorithm>

namespace zkit::circuit {
namespace {

[[noreturn]] void dimension_error(const std::string& msg) {
  throw Error(Errc::kDimensionMismatch, msg);
}

FieldElement dense(const SparseVector& row, std::size_t wire, const PrimeField& f) {
  auto it = std::lower_bound(row.begin(), row.end(), wire,
                             [](const auto& e, std::size_t w) { return e.first < w; });
  return (it != row.end() && it->first == wire) ? it->second : f.zero();
}

SparseVector to_sparse(const LinearCombination& lc, const std::vector<std::size_t>& layout) {
  SparseVector out;
  out.reserve(lc.terms().size() + 1);
  if (!lc.constant_term().is_zero()) out.emplace_back(0, lc.constant_term());
  for (const auto& t : lc.terms()) out.emplace_back(layout[t.signal], t.coeff);
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

SparseVector one_row(const PrimeField& f) { return {{0, f.one()}}; }

std::uint64_t small_arg(const FieldElement& v, const char* what, SourceLocation loc) {
  auto x = v.to_u64();
  if (!x || *x > 1u << 20) {
    throw Error(Errc::kRangeViolation, std::string(what) + " argument out of range", loc);
  }
  return *x;
}

FieldElement run_hint(const Hint& h, const std::vector<FieldElement>& args) {
  const std::size_t arity = h.builtin == "bit" ? 3 : 2;
  if (args.size() != arity) {
    throw Error(Errc::kSyntaxError, h.builtin + " takes " + std::to_string(arity) + " arguments",
                h.location);
  }
  const PrimeField& f = args[0].field();
  if (h.builtin == "bit") {
    mpz_class x = args[0].to_mpz();
    std::uint64_t i = small_arg(args[1], "bit index", h.location);
    std::uint64_t width = small_arg(args[2], "bit width", h.location);
    if (mpz_sizeinbase(x.get_mpz_t(), 2) > width && x != 0) {
      throw Error(Errc::kRangeViolation,
                  "value " + x.get_str() + " does not fit in " + std::to_string(width) + " bits",
                  h.location);
    }
    return mpz_tstbit(x.get_mpz_t(), i) ? f.one() : f.zero();
  }
  mpz_class a = args[0].to_mpz();
  mpz_class b = args[1].to_mpz();
  if (b == 0) throw Error(Errc::kDivisorZero, "division by zero in " + h.builtin, h.location);
  mpz_class r;
  if (h.builtin == "idiv") {
    mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  } else {
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  return f.element(r);
}

}  // namespace

ConstraintSystem::ConstraintSystem(const PrimeField& f, std::vector<WireInfo> wires,
                                   std::vector<Constraint> rows)
    : field_(&f), wires_(std::move(wires)), rows_(std::move(rows)) {
  if (rows_.empty()) dimension_error("constraint system needs at least one constraint");
  if (wires_.size() < 2) dimension_error("constraint system needs at least one signal wire");
  for (const auto& r : rows_) {
    for (const auto* v : {&r.a, &r.b, &r.c}) {
      for (const auto& [wire, coeff] : *v) {
        if (wire >= wires_.size()) dimension_error("constraint references wire out of range");
        if (&coeff.field() != field_) throw Error(Errc::kModulusMismatch, "coefficient field");
      }
    }
  }
}

std::optional<std::size_t> ConstraintSystem::wire_index(std::string_view name) const {
  for (std::size_t i = 0; i < wires_.size(); ++i) {
    if (wires_[i].name == name) return i;
  }
  return std::nullopt;
}

FieldElement ConstraintSystem::a(std::size_t row, std::size_t wire) const {
  return dense(rows_.at(row).a, wire, *field_);
}
FieldElement ConstraintSystem::b(std::size_t row, std::size_t wire) const {
  return dense(rows_.at(row).b, wire, *field_);
}
FieldElement ConstraintSystem::c(std::size_t row, std::size_t wire) const {
  return dense(rows_.at(row).c, wire, *field_);
}

Witness::Witness(const PrimeField& f, std::vector<FieldElement> values)
    : field_(&f), values_(std::move(values)) {
  if (values_.empty() || values_[0] != f.one()) {
    dimension_error("witness must start with the constant 1");
  }
  for (const auto& v : values_) {
    if (&v.field() != field_) throw Error(Errc::kModulusMismatch, "witness value field");
  }
}

void Witness::set(std::size_t i, const FieldElement& v) {
  if (i == 0 || i >= values_.size()) dimension_error("witness index out of range");
  if (&v.field() != field_) throw Error(Errc::kModulusMismatch, "witness value field");
  values_[i] = v;
}

FieldElement dot(const SparseVector& row, const Witness& w) {
  FieldElement acc = w.field().zero();
  for (const auto& [wire, coeff] : row) acc += coeff * w[wire];
  return acc;
}

std::vector<std::size_t> wire_layout(const CircuitAst& ast) {
  const auto& sigs = ast.signals();
  std::vector<std::size_t> layout(sigs.size());
  std::size_t next = 1;
  auto place = [&](auto pred) {
    for (std::size_t i = 0; i < sigs.size(); ++i) {
      if (pred(sigs[i].visibility)) layout[i] = next++;
    }
  };
  place([](Visibility v) { return is_input(v); });
  place([](Visibility v) { return v == Visibility::kInternal; });
  place([](Visibility v) { return v == Visibility::kOutput; });
  return layout;
}

ConstraintSystem flatten(const CircuitAst& ast) {
  const PrimeField& f = ast.field();
  const auto layout = wire_layout(ast);
  std::vector<WireInfo> wires(ast.signals().size() + 1);
  wires[0] = {kOneWireName, Visibility::kPublicInput};
  for (std::size_t i = 0; i < ast.signals().size(); ++i) {
    wires[layout[i]] = {ast.signals()[i].name, ast.signals()[i].visibility};
  }

  std::vector<Constraint> rows;
  for (const auto& stmt : ast.statements()) {
    if (const auto* a = std::get_if<Assignment>(&stmt)) {
      // x <- A*B + L  becomes  A * B = x - L;  x <- L  becomes  L * 1 = x.
      LinearCombination target = LinearCombination::signal(f, a->target);
      if (a->rhs.product) {
        rows.push_back({to_sparse(a->rhs.product->first, layout),
                        to_sparse(a->rhs.product->second, layout),
                        to_sparse(target - a->rhs.linear, layout)});
      } else {
        rows.push_back({to_sparse(a->rhs.linear, layout), one_row(f), to_sparse(target, layout)});
      }
    } else if (const auto* s = std::get_if<Assertion>(&stmt)) {
      const Quadratic* prod = s->lhs.product ? &s->lhs : (s->rhs.product ? &s->rhs : nullptr);
      if (prod) {
        // A*B + L1 = L2  becomes  A * B = L2 - L1.
        const Quadratic& other = prod == &s->lhs ? s->rhs : s->lhs;
        rows.push_back({to_sparse(prod->product->first, layout),
                        to_sparse(prod->product->second, layout),
                        to_sparse(other.linear - prod->linear, layout)});
      } else {
        rows.push_back(
            {to_sparse(s->lhs.linear, layout), one_row(f), to_sparse(s->rhs.linear, layout)});
      }
    }
  }
  return ConstraintSystem(f, std::move(wires), std::move(rows));
}

std::optional<std::size_t> first_violated(const ConstraintSystem& cs, const Witness& w) {
  if (w.size() != cs.num_wires()) {
    dimension_error("witness has " + std::to_string(w.size()) + " values, system has " +
                    std::to_string(cs.num_wires()) + " wires");
  }
  if (&w.field() != &cs.field()) dimension_error("witness and system over different fields");
  for (std::size_t q = 0; q < cs.num_constraints(); ++q) {
    const auto& r = cs.rows()[q];
    if (dot(r.a, w) * dot(r.b, w) != dot(r.c, w)) return q;
  }
  return std::nullopt;
}

bool check_constraints(const ConstraintSystem& cs, const Witness& w) {
  return !first_violated(cs, w).has_value();
}

Witness eval_witness(const CircuitAst& ast, const InputMap& inputs) {
  const PrimeField& f = ast.field();
  const auto& sigs = ast.signals();
  std::vector<std::optional<FieldElement>> values(sigs.size());

  for (const auto& [name, value] : inputs) {
    auto idx = ast.find_signal(name);
    if (!idx) throw Error(Errc::kUnknownSignal, "no signal named '" + name + "'");
    if (!is_input(sigs[*idx].visibility)) {
      throw Error(Errc::kUnknownSignal, "'" + name + "' is not an input signal");
    }
    if (&value.field() != &f) throw Error(Errc::kModulusMismatch, "input '" + name + "' field");
    values[*idx] = value;
  }
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    if (is_input(sigs[i].visibility) && !values[i]) {
      throw Error(Errc::kMissingInput, "missing value for input '" + sigs[i].name + "'");
    }
  }

  const auto& stmts = ast.statements();
  for (std::size_t k : ast.evaluation_order()) {
    if (const auto* a = std::get_if<Assignment>(&stmts[k])) {
      values[a->target] = a->rhs.evaluate(values);
    } else {
      const auto& h = std::get<Hint>(stmts[k]);
      std::vector<FieldElement> args;
      for (const auto& lc : h.args) args.push_back(lc.evaluate(values));
      values[h.target] = run_hint(h, args);
    }
  }

  for (std::size_t k = 0, n = 0; k < stmts.size(); ++k) {
    const auto* s = std::get_if<Assertion>(&stmts[k]);
    if (!s) continue;
    if (s->lhs.evaluate(values) != s->rhs.evaluate(values)) {
      throw Error(Errc::kAssertionFailed,
                  "assertion #" + std::to_string(n) + " (statement " + std::to_string(k) +
                      ") does not hold",
                  s->location);
    }
    ++n;
  }

  const auto layout = wire_layout(ast);
  std::vector<FieldElement> s(sigs.size() + 1, f.one());
  for (std::size_t i = 0; i < sigs.size(); ++i) s[layout[i]] = *values[i];
  return Witness(f, std::move(s));
}

Specialization specialize(const ConstraintSystem& cs, const InputMap& fixed) {
  const PrimeField& f = cs.field();
  std::vector<std::optional<FieldElement>> value(cs.num_wires());
  for (const auto& [name, v] : fixed) {
    auto idx = cs.wire_index(name);
    if (!idx) throw Error(Errc::kUnknownSignal, "no wire named '" + name + "'");
    if (*idx == 0) dimension_error("the constant wire cannot be fixed");
    value[*idx] = v;
  }
  Specialization out{cs, {}};
  std::vector<std::size_t> remap(cs.num_wires(), 0);
  std::vector<WireInfo> wires;
  for (std::size_t i = 0; i < cs.num_wires(); ++i) {
    if (value[i]) continue;
    remap[i] = wires.size();
    out.kept.push_back(i);
    wires.push_back(cs.wires()[i]);
  }
  auto fold = [&](const SparseVector& row) {
    FieldElement constant = f.zero();
    SparseVector r;
    for (const auto& [wire, coeff] : row) {
      if (wire == 0) {
        constant += coeff;
      } else if (value[wire]) {
        constant += coeff * *value[wire];
      } else {
        r.emplace_back(remap[wire], coeff);
      }
    }
    if (!constant.is_zero()) r.insert(r.begin(), {0, constant});
    return r;
  };
  std::vector<Constraint> rows;
  rows.reserve(cs.num_constraints());
  for (const auto& row : cs.rows()) rows.push_back({fold(row.a), fold(row.b), fold(row.c)});
  out.cs = ConstraintSystem(f, std::move(wires), std::move(rows));
  return out;
}

Witness project(const Witness& w, const std::vector<std::size_t>& kept) {
  std::vector<FieldElement> s;
  s.reserve(kept.size());
  for (std::size_t i : kept) {
    if (i >= w.size()) dimension_error("projection index out of range");
    s.push_back(w[i]);
  }
  return Witness(w.field(), std::move(s));
}

}  // namespace zkit::circuit
