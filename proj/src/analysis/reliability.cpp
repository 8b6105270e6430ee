#include "calib/analysis.hpp"

namespace calib {

std::vector<PoolBins> reliability_data(const PredictionSet& p, const GceConfig& cfg) {
    return gce_pools(p, cfg);
}

}  // namespace calib
