#pragma once

#include <cstdint>
#include <memory>

#include "streamad/core.hpp"
#include "streamad/params.hpp"

namespace streamad {

/// Validates the block of `params` for `kind` and builds a fresh detector.
/// Seed-free detectors (ILOF, OCSVM, Storm) ignore `seed`.
std::unique_ptr<Detector> make_detector(DetectorKind kind, const DetectorParams& params,
                                        std::uint64_t seed);

}  // namespace streamad
