#include "afembed/bratteli.hpp"

#include <algorithm>
#include <sstream>

#include "afembed/error.hpp"

namespace afembed {

namespace {

ValidationReport failure(std::size_t index, std::string msg) {
  ValidationReport r;
  r.valid = false;
  r.failure_index = index;
  r.message = std::move(msg);
  return r;
}

void require_valid_chain(const BratteliChain& chain) {
  const ValidationReport r = validate_chain(chain);
  if (!r.valid) fail(ErrorCode::InvalidChain, r.message);
}

}  // namespace

bool MatrixSequence::injective() const {
  return std::all_of(gammas.begin(), gammas.end(),
                     [](const MappingMatrix& g) { return g.col_positive(); });
}

ValidationReport validate_chain(const BratteliChain& chain) {
  if (chain.algebras.empty()) return failure(0, "chain has no algebras");
  if (chain.inclusions.size() + 1 != chain.algebras.size()) {
    std::ostringstream os;
    os << "expected " << chain.algebras.size() - 1 << " inclusions, got "
       << chain.inclusions.size();
    return failure(0, os.str());
  }
  for (std::size_t k = 0; k < chain.inclusions.size(); ++k) {
    const MappingMatrix& lam = chain.inclusions[k];
    const DimensionVector& src = chain.algebras[k].dims;
    const DimensionVector& dst = chain.algebras[k + 1].dims;
    if (lam.cols != src.size() || lam.rows != dst.size()) {
      return failure(k, "inclusion shape does not match adjacent algebras");
    }
    if (!lam.col_positive()) {
      return failure(k, "inclusion has a zero column (not injective)");
    }
    if (!(lam.apply(src) == dst)) {
      return failure(k, "inclusion does not map dimensions onto the next level");
    }
  }
  return ValidationReport{};
}

ValidationReport validate_matrix_sequence(const BratteliChain& chain,
                                          const MatrixSequence& seq) {
  if (seq.gammas.size() != chain.algebras.size()) {
    fail(ErrorCode::ShapeMismatch, "sequence length does not match chain depth");
  }
  for (std::size_t k = 0; k < seq.gammas.size(); ++k) {
    const MappingMatrix& g = seq.gammas[k];
    const DimensionVector& src = chain.algebras[k].dims;
    if (g.cols != src.size() || g.rows != seq.target.size()) {
      return failure(k, "mapping matrix shape mismatch");
    }
    if (!g.row_positive()) return failure(k, "mapping matrix has a zero row");
    if (!(g.apply(src) == seq.target)) {
      return failure(k, "mapping matrix does not reach the target dimensions");
    }
  }
  for (std::size_t k = 0; k + 1 < seq.gammas.size(); ++k) {
    if (!(product(seq.gammas[k + 1], chain.inclusions[k]) == seq.gammas[k])) {
      return failure(k, "consecutive mapping matrices are incompatible");
    }
  }
  return ValidationReport{};
}

std::vector<MatrixSequence> classify_morphisms(const BratteliChain& chain,
                                               const DimensionVector& target,
                                               std::size_t limit) {
  require_valid_chain(chain);
  const DimensionVector& deep = chain.algebras.back().dims;

  // Row f of the deepest matrix ranges over nonnegative solutions of
  // row * deep = target[f]; rows are independent.
  std::vector<std::vector<std::vector<Int>>> per_row;
  per_row.reserve(target.size());
  for (std::size_t f = 0; f < target.size(); ++f) {
    std::vector<Int> coins(deep.entries.begin(), deep.entries.end());
    auto sols = enumerate_row_solutions(target.entries[f], coins, 0);
    if (sols.empty()) return {};
    per_row.push_back(std::move(sols));
  }

  std::vector<MatrixSequence> out;
  std::vector<std::size_t> pick(target.size(), 0);
  for (;;) {
    std::vector<std::vector<Int>> rows;
    rows.reserve(target.size());
    for (std::size_t f = 0; f < target.size(); ++f) rows.push_back(per_row[f][pick[f]]);
    out.push_back(make_compatible(chain, MappingMatrix::from_rows(rows)));
    if (limit != 0 && out.size() == limit) return out;

    // odometer, last row fastest; per-row lists are lexicographic already
    std::size_t f = target.size();
    while (f > 0) {
      --f;
      if (++pick[f] < per_row[f].size()) break;
      pick[f] = 0;
      if (f == 0) return out;
    }
  }
}

MatrixSequence make_compatible(const BratteliChain& chain,
                               const MappingMatrix& gamma_deep) {
  if (chain.algebras.empty()) fail(ErrorCode::InvalidChain, "chain has no algebras");
  if (gamma_deep.cols != chain.algebras.back().dims.size()) {
    fail(ErrorCode::ShapeMismatch, "deepest matrix does not fit the deepest algebra");
  }
  MatrixSequence seq;
  seq.target = gamma_deep.apply(chain.algebras.back().dims);
  seq.gammas.assign(chain.algebras.size(), gamma_deep);
  for (std::size_t k = chain.algebras.size() - 1; k-- > 0;) {
    seq.gammas[k] = product(seq.gammas[k + 1], chain.inclusions[k]);
  }
  return seq;
}

EmbeddingDecision decide_embedding(const BratteliChain& chain,
                                   const DimensionVector& target) {
  require_valid_chain(chain);
  EmbeddingDecision d;
  if (auto w = divides(chain.algebras.back().dims, target)) {
    d.embeds = true;
    d.witness = make_compatible(chain, *w);
  }
  return d;
}

bool uhf_check(const std::vector<Int>& moduli, const Int& big_n) {
  if (moduli.empty()) fail(ErrorCode::NotAUhfChain, "empty modulus chain");
  for (const Int& m : moduli) {
    if (m <= 0) fail(ErrorCode::NotAUhfChain, "moduli must be positive");
  }
  for (std::size_t k = 0; k + 1 < moduli.size(); ++k) {
    if (moduli[k + 1] % moduli[k] != 0) {
      fail(ErrorCode::NotAUhfChain, "moduli do not form a divisibility chain");
    }
  }
  if (big_n <= 0) fail(ErrorCode::InvalidDimension, "target size must be positive");
  return std::all_of(moduli.begin(), moduli.end(),
                     [&](const Int& m) { return big_n % m == 0; });
}

}  // namespace afembed
