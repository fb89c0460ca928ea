#pragma once

#include "liesynth/expr.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace liesynth {

struct UFuncModel;

/// Registry of uninterpreted function symbols: name -> arity, plus optional
/// explicit numeric models that override the seeded random ones.
class UFuncTable {
 public:
  /// Registers `name` with `arity`; throws if already registered with a different arity.
  void declare(const std::string& name, std::size_t arity);
  bool contains(const std::string& name) const { return arity_.count(name) != 0; }
  std::optional<std::size_t> arity(const std::string& name) const;
  const std::map<std::string, std::size_t>& symbols() const { return arity_; }

  void bind_model(const std::string& name, const UFuncModel& model);
  const UFuncModel* model(const std::string& name) const;

  /// Registers every ufunc of `e`, checking arity consistency.
  void declare_from(const Expr& e);

 private:
  std::map<std::string, std::size_t> arity_;
  std::map<std::string, std::shared_ptr<const UFuncModel>> models_;
};

class ParseError : public std::runtime_error {
 public:
  enum class Code { Syntax, UnknownFunction, ArityMismatch };

  ParseError(Code code, std::size_t offset, const std::string& message);

  Code code() const { return code_; }
  /// Byte offset into the parsed text.
  std::size_t offset() const { return offset_; }
  const std::string& detail() const { return detail_; }

 private:
  Code code_;
  std::size_t offset_;
  std::string detail_;
};

struct ParseOptions {
  /// When set, ufunc calls are checked against (and, with `declare_on_use`,
  /// registered into) this table.
  UFuncTable* table = nullptr;
  bool declare_on_use = true;
};

/// Parses the expression grammar
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' exponent)?
///   atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')' | '-' factor
///   exponent := ['-'] integer | '(' ['-'] integer ['/' integer] ')'
///
/// A ufunc name may carry derivative marks: `phi''(s)` for unary symbols, or
/// `phi'{1,0}(x, y)` with an explicit multi-order. Decimal literals are read as
/// exact rationals. The result is in canonical simplified form.
Expr parse(std::string_view text, const ParseOptions& options = {});

}  // namespace liesynth
