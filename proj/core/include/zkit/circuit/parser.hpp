#pragma once

#include <string_view>

#include "zkit/circuit/ast.hpp"

namespace zkit::circuit {

/// Parses `.zkc` source (grammar in docs/dsl.md) into a validated AST.
/// `templates` resolves `component` statements; without it any component
/// statement is an UnknownTemplate error.
///
/// Errors: SyntaxError, UndeclaredSignal, DoubleAssignment, CyclicDependency,
/// UnassignedSignal, UnknownTemplate; all carry the source location.
CircuitAst parse_circuit(std::string_view source, const PrimeField& field,
                         const TemplateRegistry* templates = nullptr);

}  // namespace zkit::circuit
