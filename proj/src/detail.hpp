#pragma once

#include "qprep/prep.hpp"

namespace qprep::detail {

struct PreparationAccess {
  static ValidPreparation make(std::size_t dimA, std::size_t dimB, HermitianMatrix blocks) {
    return ValidPreparation(dimA, dimB, std::move(blocks));
  }
};

}  // namespace qprep::detail
