#include "micromorphx/inequalities.hpp"

#include <cmath>
#include <stdexcept>

#include "micromorphx/tensor.hpp"

namespace mmx {

namespace {

// curl extraction on the vector-gradient layout (row 3c + ax): curl_i = eps_{i,ax,c} G[3c+ax]
Eigen::MatrixXd curl_of_gradient() {
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(3, 9);
  constexpr double eps[3][3][3] = {
      {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
      {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
      {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}},
  };
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 3; ++c)
      for (int ax = 0; ax < 3; ++ax) R(i, 3 * c + ax) = eps[i][ax][c];
  return R;
}

Eigen::MatrixXd div_of_gradient() {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(1, 9);
  for (int c = 0; c < 3; ++c) d(0, 3 * c + c) = 1.0;
  return d;
}

}  // namespace

const char* tag_name(InequalityTag tag) {
  switch (tag) {
    case InequalityTag::Poincare: return "poincare";
    case InequalityTag::Korn: return "korn";
    case InequalityTag::Maxwell: return "maxwell";
    case InequalityTag::DevsymGrad: return "devsym_grad";
    case InequalityTag::SymCurl: return "sym_curl";
    case InequalityTag::DevCurl: return "dev_curl";
    case InequalityTag::DevsymDevcurl: return "devsym_devcurl";
    case InequalityTag::SymPSymCurl: return "symp_symcurl";
    case InequalityTag::SymPDevsymCurl: return "symp_devsymcurl";
    case InequalityTag::DevsymPSymCurl: return "devsymp_symcurl";
    case InequalityTag::DevsymPDevsymCurl: return "devsymp_devsymcurl";
  }
  return "?";
}

std::vector<InequalityTag> all_tags() {
  return {InequalityTag::Poincare,       InequalityTag::Korn,
          InequalityTag::Maxwell,        InequalityTag::DevsymGrad,
          InequalityTag::SymCurl,        InequalityTag::DevCurl,
          InequalityTag::DevsymDevcurl,  InequalityTag::SymPSymCurl,
          InequalityTag::SymPDevsymCurl, InequalityTag::DevsymPSymCurl,
          InequalityTag::DevsymPDevsymCurl};
}

std::optional<InequalityTag> tag_from_name(const std::string& name) {
  for (InequalityTag tag : all_tags())
    if (name == tag_name(tag)) return tag;
  return std::nullopt;
}

namespace {

struct PencilSpace {
  FieldKind kind;
  Constraint constraint;
};

PencilSpace pencil_space(InequalityTag tag) {
  switch (tag) {
    case InequalityTag::Poincare:
      return {FieldKind::Scalar, Constraint::DisplacementZero};
    case InequalityTag::Korn:
    case InequalityTag::DevsymGrad:
      return {FieldKind::Vector, Constraint::DisplacementZero};
    case InequalityTag::Maxwell:
      return {FieldKind::Vector, Constraint::TangentialZero};
    default:
      return {FieldKind::Tensor, Constraint::TangentialZero};
  }
}

}  // namespace

InequalityPencil build_pencil(InequalityTag tag, const Grid& grid) {
  InequalityPencil p;
  const Eigen::MatrixXd I9 = Eigen::MatrixXd::Identity(9, 9);
  switch (tag) {
    case InequalityTag::Poincare:
      p.map = build_dof_map(grid, FieldKind::Scalar, Constraint::DisplacementZero);
      p.numerator = assemble_mass(grid, p.map);
      p.denominator =
          assemble_gram(grid, p.map, Primitive::Gradient, Eigen::MatrixXd::Identity(3, 3));
      break;
    case InequalityTag::Korn:
      p.map = build_dof_map(grid, FieldKind::Vector, Constraint::DisplacementZero);
      p.numerator = assemble_gram(grid, p.map, Primitive::Gradient, I9);
      p.denominator = assemble_gram(grid, p.map, Primitive::Gradient, proj_sym9());
      break;
    case InequalityTag::DevsymGrad:
      p.map = build_dof_map(grid, FieldKind::Vector, Constraint::DisplacementZero);
      p.numerator = assemble_gram(grid, p.map, Primitive::Gradient, I9);
      p.denominator = assemble_gram(grid, p.map, Primitive::Gradient, proj_devsym9());
      break;
    case InequalityTag::Maxwell: {
      p.map = build_dof_map(grid, FieldKind::Vector, Constraint::TangentialZero);
      p.numerator = assemble_mass(grid, p.map);
      const Eigen::MatrixXd R = curl_of_gradient();
      const Eigen::MatrixXd d = div_of_gradient();
      p.denominator = assemble_gram(grid, p.map, Primitive::Gradient,
                                    R.transpose() * R + d.transpose() * d);
      break;
    }
    case InequalityTag::SymCurl:
      p.map = build_dof_map(grid, FieldKind::Tensor, Constraint::TangentialZero);
      p.numerator = assemble_mass(grid, p.map);
      p.denominator = assemble_gram(grid, p.map, Primitive::Value, proj_sym9());
      p.denominator.add_scaled(assemble_gram(grid, p.map, Primitive::Curl, I9), 1.0);
      break;
    case InequalityTag::DevCurl:
      p.map = build_dof_map(grid, FieldKind::Tensor, Constraint::TangentialZero);
      p.numerator = assemble_gram(grid, p.map, Primitive::Curl, I9);
      p.denominator = assemble_gram(grid, p.map, Primitive::Curl, proj_dev9());
      break;
    case InequalityTag::DevsymDevcurl:
      p.map = build_dof_map(grid, FieldKind::Tensor, Constraint::TangentialZero);
      p.numerator = assemble_mass(grid, p.map);
      p.numerator.add_scaled(assemble_gram(grid, p.map, Primitive::Curl, I9), 1.0);
      p.denominator = assemble_gram(grid, p.map, Primitive::Value, proj_devsym9());
      p.denominator.add_scaled(assemble_gram(grid, p.map, Primitive::Curl, proj_dev9()), 1.0);
      break;
    case InequalityTag::SymPSymCurl:
    case InequalityTag::SymPDevsymCurl:
    case InequalityTag::DevsymPSymCurl:
    case InequalityTag::DevsymPDevsymCurl: {
      const bool dev_value = tag == InequalityTag::DevsymPSymCurl ||
                             tag == InequalityTag::DevsymPDevsymCurl;
      const bool dev_curl = tag == InequalityTag::SymPDevsymCurl ||
                            tag == InequalityTag::DevsymPDevsymCurl;
      p.map = build_dof_map(grid, FieldKind::Tensor, Constraint::TangentialZero);
      p.numerator = assemble_mass(grid, p.map);
      p.numerator.add_scaled(assemble_gram(grid, p.map, Primitive::Curl, I9), 1.0);
      p.denominator = assemble_gram(grid, p.map, Primitive::Value,
                                    dev_value ? proj_devsym9() : proj_sym9());
      p.denominator.add_scaled(
          assemble_gram(grid, p.map, Primitive::Curl,
                        dev_curl ? proj_devsym9() : proj_sym9()),
          1.0);
      break;
    }
  }
  return p;
}

ConstantEstimate estimate_constant(InequalityTag tag, const Grid& grid,
                                   const EigOptions& opts, const VectorXd* warm_start,
                                   VectorXd* eigenvector_out) {
  InequalityPencil p = build_pencil(tag, grid);
  EigResult res = pencil_smallest(p.denominator, p.numerator, opts, warm_start);

  ConstantEstimate est;
  est.tag = tag;
  est.n = {grid.nx, grid.ny, grid.nz};
  est.lambda_min = res.lambda;
  est.iterations = res.iterations;
  est.degenerate = !res.solver_ok || res.lambda < 1e-12;
  // a degenerate pencil certifies no finite constant at all
  est.constant = est.degenerate ? std::numeric_limits<double>::infinity()
                                : 1.0 / std::sqrt(res.lambda);
  est.classification = est.degenerate ? "degenerate" : "ok";
  if (eigenvector_out) *eigenvector_out = res.x;
  return est;
}

RefinementStudy refinement_study(InequalityTag tag, const std::vector<Grid>& levels,
                                 const EigOptions& opts) {
  if (levels.empty()) throw std::invalid_argument("refinement study needs at least one level");
  for (size_t i = 1; i < levels.size(); ++i) {
    const Grid& a = levels[i - 1];
    const Grid& b = levels[i];
    const bool nested = b.nx % a.nx == 0 && b.ny % a.ny == 0 && b.nz % a.nz == 0 &&
                        a.Lx == b.Lx && a.Ly == b.Ly && a.Lz == b.Lz;
    if (!nested) throw std::invalid_argument("refinement levels must be nested");
  }

  RefinementStudy study;
  const PencilSpace space = pencil_space(tag);
  VectorXd eigvec, warm;
  const VectorXd* warm_ptr = nullptr;
  const Grid* prev_grid = nullptr;
  for (const Grid& g : levels) {
    if (prev_grid && eigvec.size() > 0) {
      // carry the coarse minimizer over as the fine start vector
      const DofMap coarse_map = build_dof_map(*prev_grid, space.kind, space.constraint);
      DofMap fine_map = build_dof_map(g, space.kind, space.constraint);
      VectorXd fine_full =
          prolong_nodal(*prev_grid, g, coarse_map.scatter(eigvec), coarse_map.ncomp);
      fine_map.apply_bc(fine_full);
      warm = fine_map.gather(fine_full);
      warm_ptr = &warm;
    }
    study.rows.push_back(estimate_constant(tag, g, opts, warm_ptr, &eigvec));
    prev_grid = &g;
  }

  bool any_degenerate = false;
  bool growth_fast = study.rows.size() >= 2;
  for (size_t i = 0; i < study.rows.size(); ++i) {
    if (study.rows[i].degenerate) any_degenerate = true;
    if (i > 0 && !study.rows[i].degenerate && !study.rows[i - 1].degenerate &&
        study.rows[i].constant < 2.0 * study.rows[i - 1].constant)
      growth_fast = false;
  }
  if (any_degenerate || growth_fast) {
    study.verdict = "DEGENERATE_EVIDENCE";
  } else if (study.rows.size() >= 2) {
    const double last = study.rows.back().constant;
    const double prev = study.rows[study.rows.size() - 2].constant;
    const double change = std::abs(last - prev) / std::max(prev, 1e-300);
    study.verdict = change <= 0.20 ? "WELL_POSED_EVIDENCE" : "INCONCLUSIVE";
  } else {
    study.verdict = "INCONCLUSIVE";
  }
  for (ConstantEstimate& row : study.rows)
    if (!row.degenerate) row.classification = study.verdict;
  return study;
}

}  // namespace mmx
