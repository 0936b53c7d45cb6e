#pragma once

#include "blockcoh/block_coherence.hpp"
#include "blockcoh/decompositions.hpp"
#include "blockcoh/errors.hpp"
#include "blockcoh/json_io.hpp"
#include "blockcoh/povm_coherence.hpp"
#include "blockcoh/property_suite.hpp"
#include "blockcoh/random.hpp"
#include "blockcoh/spectral.hpp"
