#ifndef RESONANCE_HPP
#define RESONANCE_HPP

#include "resonance/field.hpp"
#include "resonance/matrix.hpp"
#include "resonance/linalg.hpp"
#include "resonance/exterior.hpp"
#include "resonance/continuation.hpp"
#include "resonance/random.hpp"
#include "resonance/section.hpp"
#include "resonance/p1_bundles.hpp"
#include "resonance/json_io.hpp"
#include "resonance/version.hpp"

#endif  // RESONANCE_HPP
