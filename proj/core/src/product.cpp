#include "rarc/error.hpp"
#include "rarc/manifolds.hpp"

#include <string>

namespace rarc {

Product::Product(std::vector<ManifoldPtr> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw DomainError("Product: needs at least one factor");
  caps_ = {true, true, true};
  for (const auto& f : factors_) {
    offsets_.push_back(size_);
    size_ += f->rows() * f->cols();
    dim_ += f->dim();
    const Capabilities c = f->capabilities();
    caps_.has_exp = caps_.has_exp && c.has_exp;
    caps_.has_transport = caps_.has_transport && c.has_transport;
    caps_.retraction_is_second_order =
        caps_.retraction_is_second_order && c.retraction_is_second_order;
  }
}

std::string Product::name() const {
  std::string s;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i > 0) s += "x";
    s += factors_[i]->name();
  }
  return s;
}

Matrix Product::block(std::size_t i, const Matrix& z) const {
  check_shape(z, "block");
  const Manifold& f = *factors_[i];
  return Eigen::Map<const Matrix>(z.data() + offsets_[i], f.rows(), f.cols());
}

Matrix Product::stack(const std::vector<Matrix>& blocks) const {
  if (blocks.size() != factors_.size()) {
    throw DimensionError("Product::stack: wrong number of blocks");
  }
  Matrix z(size_, 1);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    factors_[i]->check_shape(blocks[i], "Product::stack");
    Eigen::Map<Matrix>(z.data() + offsets_[i], blocks[i].rows(), blocks[i].cols()) =
        blocks[i];
  }
  return z;
}

namespace {

template <typename Op>
Matrix blockwise(const Product& p, Op op) {
  std::vector<Matrix> out;
  out.reserve(p.factors().size());
  for (std::size_t i = 0; i < p.factors().size(); ++i) {
    out.push_back(op(i, *p.factors()[i]));
  }
  return p.stack(out);
}

}  // namespace

Matrix Product::project(const Matrix& x, const Matrix& w) const {
  return blockwise(*this, [&](std::size_t i, const Manifold& f) {
    return f.project(block(i, x), block(i, w));
  });
}

double Product::inner(const Matrix& x, const Matrix& u, const Matrix& v) const {
  double s = 0.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    s += factors_[i]->inner(block(i, x), block(i, u), block(i, v));
  }
  return s;
}

Matrix Product::retract(const Matrix& x, const Matrix& v) const {
  return blockwise(*this, [&](std::size_t i, const Manifold& f) {
    return f.retract(block(i, x), block(i, v));
  });
}

Matrix Product::exp(const Matrix& x, const Matrix& v) const {
  if (!caps_.has_exp) unsupported("exp");
  return blockwise(*this, [&](std::size_t i, const Manifold& f) {
    return f.exp(block(i, x), block(i, v));
  });
}

Matrix Product::transport(const Matrix& x, const Matrix& v, const Matrix& u) const {
  if (!caps_.has_transport) unsupported("transport");
  return blockwise(*this, [&](std::size_t i, const Manifold& f) {
    return f.transport(block(i, x), block(i, v), block(i, u));
  });
}

Matrix Product::inverse_transport(const Matrix& x, const Matrix& v,
                                  const Matrix& w) const {
  if (!caps_.has_transport) unsupported("inverse_transport");
  return blockwise(*this, [&](std::size_t i, const Manifold& f) {
    return f.inverse_transport(block(i, x), block(i, v), block(i, w));
  });
}

double Product::feasibility_residual(const Matrix& x) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    worst = std::max(worst, factors_[i]->feasibility_residual(block(i, x)));
  }
  return worst;
}

Matrix Product::random_point(CounterRng& rng) const {
  return blockwise(*this, [&](std::size_t, const Manifold& f) {
    return f.random_point(rng);
  });
}

}  // namespace rarc
