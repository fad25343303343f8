#pragma once

// Block-local Jordan kernels shared by the library sources.

#include <Eigen/Dense>

#include "symcone/cone.hpp"

namespace symcone::detail {

struct BlockSpectrum {
  Eigen::VectorXd values;  // descending
  Eigen::MatrixXd frame;   // block-local isometric idempotents, one per column
};

Eigen::VectorXd block_product(const Block& b, const Eigen::Ref<const Eigen::VectorXd>& x,
                              const Eigen::Ref<const Eigen::VectorXd>& y);

BlockSpectrum block_spectrum(const Block& b, const Eigen::Ref<const Eigen::VectorXd>& x,
                             bool with_frame);

}  // namespace symcone::detail
