#pragma once

#include "hybridmark/arnold.hpp"
#include "hybridmark/attacks.hpp"
#include "hybridmark/bench.hpp"
#include "hybridmark/codec.hpp"
#include "hybridmark/image.hpp"
#include "hybridmark/metrics.hpp"
#include "hybridmark/netpbm.hpp"
#include "hybridmark/pn.hpp"
#include "hybridmark/transforms.hpp"
