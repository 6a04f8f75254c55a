#pragma once

#include <optional>
#include <string>
#include <vector>

#include "micromorphx/assembly.hpp"

namespace mmx {

/// Each tag fixes a numerator quadratic form N and a denominator form D on a
/// discrete space with its boundary constraint; the estimated constant c is
/// the best value with sqrt(N) <= c sqrt(D) on that space, c = 1/sqrt(lambda)
/// for the smallest lambda of D x = lambda N x.
enum class InequalityTag {
  Poincare,        // scalar, zero trace:      |u|       <= c |grad u|
  Korn,            // vector, zero trace:      |grad u|  <= c |sym grad u|
  Maxwell,         // vector, tangential zero: |v|       <= c (|curl v|^2 + |div v|^2)^1/2
  DevsymGrad,      // vector, zero trace:      |grad u|  <= c |dev sym grad u|
  SymCurl,         // tensor, tangential zero: |P|       <= c (|sym P|^2 + |Curl P|^2)^1/2
  DevCurl,         // tensor, tangential zero: |Curl P|  <= c |dev Curl P|
  DevsymDevcurl,   // tensor: |P|^2 + |Curl P|^2 <= c^2 (|dev sym P|^2 + |dev Curl P|^2)
  // exploratory combinations with the curl channel projected onto its
  // symmetric part; expected to lose control under refinement
  SymPSymCurl,        // denominator |sym P|^2     + |sym Curl P|^2
  SymPDevsymCurl,     // denominator |sym P|^2     + |dev sym Curl P|^2
  DevsymPSymCurl,     // denominator |dev sym P|^2 + |sym Curl P|^2
  DevsymPDevsymCurl,  // denominator |dev sym P|^2 + |dev sym Curl P|^2
};

const char* tag_name(InequalityTag tag);
std::optional<InequalityTag> tag_from_name(const std::string& name);
std::vector<InequalityTag> all_tags();

/// Numerator / denominator Grams plus the dof map they live on.
struct InequalityPencil {
  DofMap map;
  Csr numerator;
  Csr denominator;
};
InequalityPencil build_pencil(InequalityTag tag, const Grid& grid);

struct ConstantEstimate {
  InequalityTag tag = InequalityTag::Poincare;
  std::array<int, 3> n = {0, 0, 0};
  double constant = 0.0;
  double lambda_min = 0.0;
  int iterations = 0;
  bool degenerate = false;
  std::string classification;  // "ok" | "degenerate" | study verdict
};

/// Smallest generalized eigenvalue of (D, N) by inverse iteration; a failing
/// inner solve or a vanishing eigenvalue marks the pencil degenerate (the
/// denominator cannot control the numerator on this space).
ConstantEstimate estimate_constant(InequalityTag tag, const Grid& grid,
                                   const EigOptions& opts = {},
                                   const VectorXd* warm_start = nullptr,
                                   VectorXd* eigenvector_out = nullptr);

struct RefinementStudy {
  std::vector<ConstantEstimate> rows;
  std::string verdict;  // WELL_POSED_EVIDENCE | DEGENERATE_EVIDENCE | INCONCLUSIVE
};

/// Constants across nested levels (each grid must divide the next); coarse
/// eigenvectors warm-start the finer solves. The verdict follows the sequence:
/// bounded (last relative change <= 20%) versus unbounded growth (>= 2x per
/// level) or an exactly singular denominator.
RefinementStudy refinement_study(InequalityTag tag, const std::vector<Grid>& levels,
                                 const EigOptions& opts = {});

}  // namespace mmx
