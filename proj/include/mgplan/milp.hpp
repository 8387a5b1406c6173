#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mgplan/catalog.hpp"
#include "mgplan/dispatch.hpp"
#include "mgplan/planner.hpp"
#include "mgplan/resources.hpp"

namespace mgplan::milp {

enum class VarKind { continuous, integer, binary };
enum class Sense { le, ge, eq };

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = 0.0;

  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Term {
  std::size_t var = 0;
  double coef = 0.0;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::le;
  double rhs = 0.0;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Minimisation model: variables with bounds and kinds, a sparse linear
/// objective plus constant, and named sparse rows. Zero coefficients are
/// never stored.
class LinearModel {
 public:
  std::size_t add_variable(std::string name, VarKind kind, double lower, double upper);
  void set_objective(std::vector<Term> terms, double constant = 0.0);
  void add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs);

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index(std::string_view name) const;  // throws InputError when absent

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Term>& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }

  std::size_t count(VarKind kind) const;
  void validate() const;

  friend bool operator==(const LinearModel& a, const LinearModel& b) {
    return a.variables_ == b.variables_ && a.objective_ == b.objective_ &&
           a.objective_constant_ == b.objective_constant_ &&
           a.constraints_ == b.constraints_;
  }

 private:
  std::vector<Term> clean(std::vector<Term> terms) const;

  std::vector<Variable> variables_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::vector<Term> objective_;
  double objective_constant_ = 0.0;
  std::vector<Constraint> constraints_;
};

// Fixed names for external tools. Steps are numbered 1..T; soc_0 is the
// initial stored energy.
namespace names {
inline constexpr std::string_view n_pv = "n_pv";
inline constexpr std::string_view n_wt = "n_wt";
inline constexpr std::string_view n_bess = "n_bess";
std::string step(std::string_view family, std::size_t t);
}  // namespace names

// Rows generated for every step.
inline constexpr std::size_t kRowsPerStep = 11;

struct ModelOptions {
  std::size_t max_rows = 2'000'000;
};

/// Sizing MILP over the search space: integer counts, per-step dispatch
/// variables, one discharge-mode binary per step, and the balance, reserve,
/// storage and cap rows.
LinearModel build_model(const Catalog& catalog, const ScenarioSeries& series,
                        const AvailabilitySeries& availability, const SearchSpace& space,
                        const ProjectParams& params, const ModelOptions& options = {});

/// CPLEX-style LP text. Deterministic; parse_lp(export_lp(m)) == m.
std::string export_lp(const LinearModel& model);
LinearModel parse_lp(std::string_view text);

using SolutionAssignment = std::unordered_map<std::string, double>;

/// JSON ({"values": {...}} or a flat object) or whitespace-separated
/// "name value" pairs ('#' starts a comment).
SolutionAssignment parse_solution(std::string_view text);

/// Maps a sizing and its dispatch trace onto the model's variable names.
SolutionAssignment assignment_from_dispatch(const Sizing& sizing, const DispatchResult& dispatch);

struct RowResidual {
  std::string name;
  double residual = 0.0;   // > 0 violates (lhs - rhs for <= and =, rhs - lhs for >=)
  double violation = 0.0;  // max(0, residual), |residual| for equalities
};

struct ResidualReport {
  std::vector<RowResidual> rows;    // one per constraint, model order
  std::vector<RowResidual> bounds;  // bound and integrality violations only
  double max_violation = 0.0;
  std::string worst;
  double objective = 0.0;
  bool feasible = false;
};

ResidualReport validate_solution(const LinearModel& model, const SolutionAssignment& assignment,
                                 double tolerance);

}  // namespace mgplan::milp
