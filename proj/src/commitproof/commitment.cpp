#include "colo/commitproof/commitment.hpp"

namespace colo {

Commitment commit(const Scalar& value, const Scalar& randomness) {
  return Commitment{GroupElement::mul_gh(value, randomness)};
}

Commitment commit(RingElement value, const Scalar& randomness) {
  return commit(Scalar::from_u64(value.value), randomness);
}

bool verify_opening(const Commitment& cm, const Opening& opening) {
  return commit(opening.value, opening.randomness) == cm;
}

}  // namespace colo
