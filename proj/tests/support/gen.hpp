#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "nullnrc/ast.hpp"
#include "nullnrc/data.hpp"
#include "nullnrc/handlers.hpp"

namespace nrc::testgen {

// Shared fixture: diseases (nullable type column), patients (nullable
// did/age), plain (no nullable columns).
const Database& fixture_db();
const char* fixture_json();

struct GenConfig {
  Mode mode = Mode::NRC_NULL;
  int max_depth = 7;
  bool allow_tables = true;
};

// Generates closed terms that check against a chosen target type.
class TermGen {
 public:
  TermGen(const Schema& schema, std::uint32_t seed, GenConfig cfg);

  std::pair<TermPtr, TyPtr> query();
  TermPtr term_at(const TyPtr& ty) { return gen(ty, cfg_.max_depth); }
  TyPtr random_ty(int depth);

 private:
  const Schema& schema_;
  std::mt19937 rng_;
  GenConfig cfg_;
  std::vector<std::pair<std::string, TyPtr>> env_;
  int binder_counter_ = 0;
  std::vector<const TableDecl*> tables_;

  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint32_t>(n)); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

  TermPtr gen(const TyPtr& ty, int depth);
  TermPtr leaf(const TyPtr& ty);
  TermPtr constant_of(BaseTy b);
  TermPtr maybe_env_var(const TyPtr& ty);
  TermPtr gen_set(const TyPtr& ty, int depth);
  TermPtr gen_bool(int depth);
};

// SQL-core flat NRC_NULL queries: unions of comprehension nests over the
// fixture tables with scalar predicates; exactly the fragment to_sql
// supports (no empty() in predicates).
class FlatQueryGen {
 public:
  FlatQueryGen(const Schema& schema, std::uint32_t seed);

  std::pair<TermPtr, TyPtr> query();

 private:
  const Schema& schema_;
  std::mt19937 rng_;
  std::vector<const TableDecl*> tables_;
  int binder_counter_ = 0;

  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint32_t>(n)); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

  struct Scope {
    std::vector<std::pair<std::string, const TableDecl*>> binders;
  };

  TermPtr scalar_of(BaseTy b, const Scope& scope, int depth);
  TermPtr predicate(const Scope& scope, int depth);
  TermPtr branch(const std::vector<TyField>& signature);
};

NullHandler random_handler(std::mt19937& rng, const TyPtr& flat_ty);

}  // namespace nrc::testgen
