// tubekit - point tube pretext targets for point cloud videos
// Convenience header pulling in the whole library.

#ifndef TUBEKIT_TUBEKIT_HPP
#define TUBEKIT_TUBEKIT_HPP

#include "tubekit/binary.hpp"
#include "tubekit/bundle.hpp"
#include "tubekit/checks.hpp"
#include "tubekit/config.hpp"
#include "tubekit/evaluate.hpp"
#include "tubekit/geometry.hpp"
#include "tubekit/losses.hpp"
#include "tubekit/motion_targets.hpp"
#include "tubekit/oracle.hpp"
#include "tubekit/pcv_io.hpp"
#include "tubekit/rng.hpp"
#include "tubekit/synthetic.hpp"
#include "tubekit/tube_pipeline.hpp"
#include "tubekit/types.hpp"

#endif  // TUBEKIT_TUBEKIT_HPP
