#include "sync/lmi.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace synckit {

namespace {

constexpr double kTraceCap = 1e6;

Matrix embed_qe(const Matrix& Q, const Matrix& S) {
  const Eigen::Index n = Q.rows();
  Matrix Qe(2 * n, 2 * n);
  Qe.topLeftCorner(n, n) = Q;
  Qe.topRightCorner(n, n) = S;
  Qe.bottomLeftCorner(n, n) = -S;
  Qe.bottomRightCorner(n, n) = Q;
  return Qe;
}

std::vector<Eigen::Index> block_indices(const std::vector<const VariableBlock*>& blocks) {
  std::vector<Eigen::Index> idx;
  for (const auto* b : blocks)
    for (Eigen::Index i = 0; i < b->scalar_count(); ++i) idx.push_back(b->offset + i);
  return idx;
}

Matrix norm_bound_value(const Matrix& X, const Matrix& Y, double kappa_bar) {
  const Eigen::Index n = X.rows(), m = Y.rows();
  Matrix V(n + m, n + m);
  V.topLeftCorner(n, n) = X + X.transpose() - Matrix::Identity(n, n);
  V.topRightCorner(n, m) = Y.transpose();
  V.bottomLeftCorner(m, n) = Y;
  V.bottomRightCorner(m, m) = kappa_bar * kappa_bar * Matrix::Identity(m, m);
  return V;
}

// Theta_k = (I_2 (x) A X) - (Lambda_k (x) B Y), with Lambda_k the rotation
// form of lambda_k = alpha + j beta.
Matrix theta(const Plant& p, const Matrix& X, const Matrix& Y, Complex lambda) {
  const Eigen::Index n = p.n();
  const double alpha = lambda.real(), beta = lambda.imag();
  const Matrix AX = p.A * X;
  const Matrix BY = p.B * Y;
  Matrix T(2 * n, 2 * n);
  T.topLeftCorner(n, n) = AX - alpha * BY;
  T.topRightCorner(n, n) = beta * BY;
  T.bottomLeftCorner(n, n) = -beta * BY;
  T.bottomRightCorner(n, n) = AX - alpha * BY;
  return T;
}

// The structured bilinear inequality with frozen Z, W: the value of
// [[2mu Qe, Qe], [Qe, 0]] + He{[[Theta Z, Theta W], [-Xe Z, -Xe W]]}.
Matrix structured_value(const Plant& p, Complex lambda, const Matrix& X, const Matrix& Y,
                        const Matrix& Q, const Matrix& S, const Matrix& Z, const Matrix& W,
                        double mu) {
  const Eigen::Index n = p.n();
  const Matrix Qe = embed_qe(Q, S);
  const Matrix Th = theta(p, X, Y, lambda);
  Matrix Xe = Matrix::Zero(2 * n, 2 * n);
  Xe.topLeftCorner(n, n) = X;
  Xe.bottomRightCorner(n, n) = X;

  Matrix V(4 * n, 4 * n);
  V.topLeftCorner(2 * n, 2 * n) = 2.0 * mu * Qe;
  V.topRightCorner(2 * n, 2 * n) = Qe;
  V.bottomLeftCorner(2 * n, 2 * n) = Qe;
  V.bottomRightCorner(2 * n, 2 * n).setZero();

  Matrix Bil(4 * n, 4 * n);
  Bil.topLeftCorner(2 * n, 2 * n) = Th * Z;
  Bil.topRightCorner(2 * n, 2 * n) = Th * W;
  Bil.bottomLeftCorner(2 * n, 2 * n) = -Xe * Z;
  Bil.bottomRightCorner(2 * n, 2 * n) = -Xe * W;
  V += Bil + Bil.transpose();
  return V;
}

}  // namespace

Matrix Certificate::Qe(std::size_t k) const { return embed_qe(Q.at(k), Sigma.at(k)); }

double Certificate::min_eigenvalue() const {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < Q.size(); ++k) {
    const double lam =
        Eigen::SelfAdjointEigenSolver<Matrix>(Qe(k), Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    worst = std::min(worst, lam);
  }
  return worst;
}

MultiplierSet MultiplierSet::scaled_identity(std::size_t nu, Eigen::Index two_n,
                                             double alpha) {
  MultiplierSet m;
  for (std::size_t k = 0; k < nu; ++k) {
    m.Z.push_back(Matrix::Identity(two_n, two_n));
    m.W.push_back(alpha * Matrix::Identity(two_n, two_n));
  }
  return m;
}

double strictness_margin(const Matrix& A) { return 1e-6 * (1.0 + matrix_2norm(A)); }

SdpProblem assemble_synthesis(const Plant& p, const SpectrumSlice& s,
                              const MultiplierSet& m, double mu, double kappa_bar) {
  const Eigen::Index n = p.n();
  const std::size_t nu = s.nu();
  if (m.Z.size() != nu || m.W.size() != nu)
    throw DimensionMismatch("assemble_synthesis: multiplier count must match spectrum");
  for (std::size_t k = 0; k < nu; ++k)
    if (m.Z[k].rows() != 2 * n || m.Z[k].cols() != 2 * n || m.W[k].rows() != 2 * n ||
        m.W[k].cols() != 2 * n)
      throw DimensionMismatch("assemble_synthesis: multipliers must be 2n x 2n");

  SdpProblem prob;
  prob.margin = strictness_margin(p.A);
  prob.blocks.reserve(2 + 2 * nu);

  Eigen::Index off = 0;
  auto add_block = [&](const std::string& name, BlockKind kind, Eigen::Index r,
                       Eigen::Index c) -> const VariableBlock& {
    prob.blocks.push_back({name, kind, r, c, off});
    off += prob.blocks.back().scalar_count();
    return prob.blocks.back();
  };
  const VariableBlock& bX = add_block("X", BlockKind::Full, n, n);
  const VariableBlock& bY = add_block("Y", BlockKind::Full, p.m(), n);
  std::vector<const VariableBlock*> bQ, bS;
  for (std::size_t k = 0; k < nu; ++k) {
    bQ.push_back(&add_block("Q" + std::to_string(k + 1), BlockKind::Symmetric, n, n));
    bS.push_back(&add_block("Sigma" + std::to_string(k + 1), BlockKind::Skew, n, n));
  }
  const Eigen::Index nscalars = off;

  for (std::size_t k = 0; k < nu; ++k) {
    const Complex lambda = s.eigenvalues[k];
    const Matrix Zk = m.Z[k], Wk = m.W[k];
    auto eval = [&, k, lambda, Zk, Wk](const Vector& y) {
      return structured_value(p, lambda, bX.unpack(y), bY.unpack(y), bQ[k]->unpack(y),
                              bS[k]->unpack(y), Zk, Wk, mu);
    };
    prob.constraints.push_back(constraint_from_evaluator(
        4 * n, nscalars, eval, block_indices({&bX, &bY, bQ[k], bS[k]}),
        ConstraintSense::Leq, prob.margin));
  }
  for (std::size_t k = 0; k < nu; ++k) {
    auto eval = [&, k](const Vector& y) {
      return embed_qe(bQ[k]->unpack(y), bS[k]->unpack(y));
    };
    prob.constraints.push_back(constraint_from_evaluator(
        2 * n, nscalars, eval, block_indices({bQ[k], bS[k]}), ConstraintSense::Geq,
        prob.margin));
  }
  {
    auto eval = [&](const Vector& y) {
      return norm_bound_value(bX.unpack(y), bY.unpack(y), kappa_bar);
    };
    prob.constraints.push_back(constraint_from_evaluator(
        n + p.m(), nscalars, eval, block_indices({&bX, &bY}), ConstraintSense::Geq,
        prob.margin));
  }
  for (std::size_t k = 0; k < nu; ++k) {
    auto eval = [&, k](const Vector& y) {
      return Matrix::Constant(1, 1, kTraceCap - bQ[k]->unpack(y).trace());
    };
    prob.constraints.push_back(constraint_from_evaluator(
        1, nscalars, eval, block_indices({bQ[k]}), ConstraintSense::Geq, 0.0));
  }
  return prob;
}

SdpProblem assemble_analysis(const Plant& p, const SpectrumSlice& s, const Matrix& X,
                             const Matrix& Y, double mu, double kappa_bar) {
  const Eigen::Index n = p.n();
  if (X.rows() != n || X.cols() != n || Y.rows() != p.m() || Y.cols() != n)
    throw DimensionMismatch("assemble_analysis: X must be n x n and Y m x n");
  if (!X.allFinite() || !Y.allFinite())
    throw NonFinite("assemble_analysis: frozen X, Y must be finite");

  // The gain norm bound is constant given (X, Y); checked here, not emitted.
  {
    const Matrix V = norm_bound_value(X, Y, kappa_bar);
    const double lam = Eigen::SelfAdjointEigenSolver<Matrix>(V, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .minCoeff();
    if (lam < -1e-9 * (1.0 + V.norm()))
      throw FrozenGainViolatesNormBound("assemble_analysis: frozen (X, Y) violate the norm bound");
  }

  SdpProblem prob;
  prob.margin = strictness_margin(p.A);
  const std::size_t nu = s.nu();
  prob.blocks.reserve(4 * nu);

  Eigen::Index off = 0;
  auto add_block = [&](const std::string& name, BlockKind kind, Eigen::Index r,
                       Eigen::Index c) -> const VariableBlock& {
    prob.blocks.push_back({name, kind, r, c, off});
    off += prob.blocks.back().scalar_count();
    return prob.blocks.back();
  };
  std::vector<const VariableBlock*> bZ, bW, bQ, bS;
  for (std::size_t k = 0; k < nu; ++k) {
    const std::string id = std::to_string(k + 1);
    bZ.push_back(&add_block("Z" + id, BlockKind::Full, 2 * n, 2 * n));
    bW.push_back(&add_block("W" + id, BlockKind::Full, 2 * n, 2 * n));
    bQ.push_back(&add_block("Q" + id, BlockKind::Symmetric, n, n));
    bS.push_back(&add_block("Sigma" + id, BlockKind::Skew, n, n));
  }
  const Eigen::Index nscalars = off;

  for (std::size_t k = 0; k < nu; ++k) {
    const Complex lambda = s.eigenvalues[k];
    auto eval = [&, k, lambda](const Vector& y) {
      return structured_value(p, lambda, X, Y, bQ[k]->unpack(y), bS[k]->unpack(y),
                              bZ[k]->unpack(y), bW[k]->unpack(y), mu);
    };
    prob.constraints.push_back(constraint_from_evaluator(
        4 * n, nscalars, eval, block_indices({bZ[k], bW[k], bQ[k], bS[k]}),
        ConstraintSense::Leq, prob.margin));
  }
  for (std::size_t k = 0; k < nu; ++k) {
    auto eval = [&, k](const Vector& y) {
      return embed_qe(bQ[k]->unpack(y), bS[k]->unpack(y));
    };
    prob.constraints.push_back(constraint_from_evaluator(
        2 * n, nscalars, eval, block_indices({bQ[k], bS[k]}), ConstraintSense::Geq,
        prob.margin));
  }
  for (std::size_t k = 0; k < nu; ++k) {
    auto eval = [&, k](const Vector& y) {
      return Matrix::Constant(1, 1, kTraceCap - bQ[k]->unpack(y).trace());
    };
    prob.constraints.push_back(constraint_from_evaluator(
        1, nscalars, eval, block_indices({bQ[k]}), ConstraintSense::Geq, 0.0));
  }
  return prob;
}

SdpProblem assemble_common_q(const Plant& p, const std::vector<Complex>& values,
                             double mu, double kappa_bar) {
  if (values.empty()) throw EmptyValueList("assemble_common_q: no eigenvalues given");
  const Eigen::Index n = p.n();

  SdpProblem prob;
  prob.margin = strictness_margin(p.A);
  prob.blocks.reserve(2);
  prob.blocks.push_back({"Q", BlockKind::Symmetric, n, n, 0});
  const VariableBlock& bQ = prob.blocks[0];
  prob.blocks.push_back({"Y", BlockKind::Full, p.m(), n, bQ.scalar_count()});
  const VariableBlock& bY = prob.blocks[1];
  const Eigen::Index nscalars = bQ.scalar_count() + bY.scalar_count();
  const auto all_vars = block_indices({&bQ, &bY});

  for (const Complex& lambda : values) {
    // Conjugate values give congruent constraints (flip the off-diagonal
    // blocks); canonicalize to Im >= 0 so they are identical.
    const double alpha = lambda.real(), beta = std::abs(lambda.imag());
    auto eval = [&, alpha, beta](const Vector& y) {
      const Matrix Q = bQ.unpack(y);
      const Matrix AQ = p.A * Q;
      const Matrix BY = p.B * bY.unpack(y);
      Matrix M(2 * n, 2 * n);
      M.topLeftCorner(n, n) = AQ - alpha * BY;
      M.topRightCorner(n, n) = beta * BY;
      M.bottomLeftCorner(n, n) = -beta * BY;
      M.bottomRightCorner(n, n) = AQ - alpha * BY;
      Matrix V = M + M.transpose();
      V.topLeftCorner(n, n) += 2.0 * mu * Q;
      V.bottomRightCorner(n, n) += 2.0 * mu * Q;
      return V;
    };
    prob.constraints.push_back(constraint_from_evaluator(
        2 * n, nscalars, eval, all_vars, ConstraintSense::Leq, prob.margin));
  }
  {
    auto eval = [&](const Vector& y) { return bQ.unpack(y); };
    prob.constraints.push_back(constraint_from_evaluator(
        n, nscalars, eval, block_indices({&bQ}), ConstraintSense::Geq, prob.margin));
  }
  {
    auto eval = [&](const Vector& y) {
      return norm_bound_value(bQ.unpack(y), bY.unpack(y), kappa_bar);
    };
    prob.constraints.push_back(constraint_from_evaluator(
        n + p.m(), nscalars, eval, all_vars, ConstraintSense::Geq, prob.margin));
  }
  {
    auto eval = [&](const Vector& y) {
      return Matrix::Constant(1, 1, kTraceCap - bQ.unpack(y).trace());
    };
    prob.constraints.push_back(constraint_from_evaluator(
        1, nscalars, eval, block_indices({&bQ}), ConstraintSense::Geq, 0.0));
  }
  return prob;
}

SdpProblem assemble_lyap_check(const RealEmbedding& aek, double mu) {
  if (!aek.Aek.allFinite()) throw NonFinite("assemble_lyap_check: non-finite embedding");
  const Eigen::Index n = aek.Aek.rows() / 2;

  SdpProblem prob;
  prob.margin = strictness_margin(aek.Aek);
  prob.blocks.reserve(2);
  prob.blocks.push_back({"P", BlockKind::Symmetric, n, n, 0});
  const VariableBlock& bP = prob.blocks[0];
  prob.blocks.push_back({"Pi", BlockKind::Skew, n, n, bP.scalar_count()});
  const VariableBlock& bPi = prob.blocks[1];
  const Eigen::Index nscalars = bP.scalar_count() + bPi.scalar_count();
  const auto all_vars = block_indices({&bP, &bPi});

  auto pe = [&](const Vector& y) {
    const Matrix P = bP.unpack(y);
    const Matrix Pi = bPi.unpack(y);
    Matrix Pe(2 * n, 2 * n);
    Pe.topLeftCorner(n, n) = P;
    Pe.topRightCorner(n, n) = -Pi;
    Pe.bottomLeftCorner(n, n) = Pi;
    Pe.bottomRightCorner(n, n) = P;
    return Pe;
  };
  prob.constraints.push_back(constraint_from_evaluator(
      2 * n, nscalars, pe, all_vars, ConstraintSense::Geq, prob.margin));
  {
    auto eval = [&](const Vector& y) {
      const Matrix Pe = pe(y);
      const Matrix M = Pe * aek.Aek;
      return Matrix(M + M.transpose() + 2.0 * mu * Pe);
    };
    prob.constraints.push_back(constraint_from_evaluator(
        2 * n, nscalars, eval, all_vars, ConstraintSense::Leq, prob.margin));
  }
  {
    auto eval = [&](const Vector& y) {
      return Matrix::Constant(1, 1, kTraceCap - bP.unpack(y).trace());
    };
    prob.constraints.push_back(constraint_from_evaluator(
        1, nscalars, eval, block_indices({&bP}), ConstraintSense::Geq, 0.0));
  }
  return prob;
}

SynthesisVars extract_synthesis(const SdpProblem& prob, const Vector& y, std::size_t nu) {
  SynthesisVars v;
  v.X = prob.block("X").unpack(y);
  v.Y = prob.block("Y").unpack(y);
  for (std::size_t k = 1; k <= nu; ++k) {
    v.cert.Q.push_back(prob.block("Q" + std::to_string(k)).unpack(y));
    v.cert.Sigma.push_back(prob.block("Sigma" + std::to_string(k)).unpack(y));
  }
  return v;
}

AnalysisVars extract_analysis(const SdpProblem& prob, const Vector& y, std::size_t nu) {
  AnalysisVars v;
  for (std::size_t k = 1; k <= nu; ++k) {
    const std::string id = std::to_string(k);
    v.multipliers.Z.push_back(prob.block("Z" + id).unpack(y));
    v.multipliers.W.push_back(prob.block("W" + id).unpack(y));
    v.cert.Q.push_back(prob.block("Q" + id).unpack(y));
    v.cert.Sigma.push_back(prob.block("Sigma" + id).unpack(y));
  }
  return v;
}

}  // namespace synckit
