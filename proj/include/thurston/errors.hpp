#ifndef THURSTON_ERRORS_HPP
#define THURSTON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thurston {

// Every domain failure carries one of these codes; the CLI maps them to
// exit statuses (parse_error -> 3, everything else -> 2).
enum class errc {
  duplicate_edge,
  dangling_state,
  not_irreducible,
  convergence_failure,
  cycle_not_in_graph,
  graph_mismatch,
  budget_exceeded,
  identity_element,
  rank_mismatch,
  singular_generator,
  eigen_failure,
  non_loxodromic,
  not_tangent,
  negative_curvature,
  unknown_preset,
  index_out_of_range,
  non_positive_length,
  insufficient_data,
  invalid_argument,
  parse_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::duplicate_edge: return "DuplicateEdge";
    case errc::dangling_state: return "DanglingState";
    case errc::not_irreducible: return "NotIrreducible";
    case errc::convergence_failure: return "ConvergenceFailure";
    case errc::cycle_not_in_graph: return "CycleNotInGraph";
    case errc::graph_mismatch: return "GraphMismatch";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::identity_element: return "IdentityElement";
    case errc::rank_mismatch: return "RankMismatch";
    case errc::singular_generator: return "SingularGenerator";
    case errc::eigen_failure: return "EigenFailure";
    case errc::non_loxodromic: return "NonLoxodromic";
    case errc::not_tangent: return "NotTangent";
    case errc::negative_curvature: return "NegativeCurvature";
    case errc::unknown_preset: return "UnknownPreset";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::non_positive_length: return "NonPositiveLength";
    case errc::insufficient_data: return "InsufficientData";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace thurston

#endif
