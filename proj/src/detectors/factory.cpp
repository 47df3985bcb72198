#include "streamad/detectors/factory.hpp"

#include "streamad/detectors/hstree.hpp"
#include "streamad/detectors/iforest_asd.hpp"
#include "streamad/detectors/ilof.hpp"
#include "streamad/detectors/kitnet.hpp"
#include "streamad/detectors/loda.hpp"
#include "streamad/detectors/ocsvm.hpp"
#include "streamad/detectors/rrcf.hpp"
#include "streamad/detectors/rshash.hpp"
#include "streamad/detectors/storm.hpp"
#include "streamad/detectors/xstream.hpp"

namespace streamad {

std::unique_ptr<Detector> make_detector(DetectorKind kind, const DetectorParams& params,
                                        std::uint64_t seed) {
    params.validate(kind);
    switch (kind) {
    case DetectorKind::HSTree: return std::make_unique<HalfSpaceTrees>(params.hstree, seed);
    case DetectorKind::IForestASD: return std::make_unique<IForestASD>(params.iforestasd, seed);
    case DetectorKind::ILOF: return std::make_unique<IncrementalLOF>(params.ilof);
    case DetectorKind::KitNet: return std::make_unique<KitNet>(params.kitnet, seed);
    case DetectorKind::LODA: return std::make_unique<LODA>(params.loda, seed);
    case DetectorKind::OCSVM: return std::make_unique<OneClassSVM>(params.ocsvm);
    case DetectorKind::RRCF: return std::make_unique<RRCF>(params.rrcf, seed);
    case DetectorKind::RSHash: return std::make_unique<RSHash>(params.rshash, seed);
    case DetectorKind::Storm: return std::make_unique<Storm>(params.storm);
    case DetectorKind::XStream: return std::make_unique<XStream>(params.xstream, seed);
    }
    throw Error("unknown detector kind");
}

}  // namespace streamad
