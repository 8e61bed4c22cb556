#pragma once

#include "hyperflow/densemat.hpp"
#include "hyperflow/ensembles.hpp"
#include "hyperflow/error.hpp"
#include "hyperflow/flow.hpp"
#include "hyperflow/inertia.hpp"
#include "hyperflow/matching.hpp"
#include "hyperflow/portrait.hpp"
#include "hyperflow/rng.hpp"
#include "hyperflow/robustness.hpp"
#include "hyperflow/spectral.hpp"
