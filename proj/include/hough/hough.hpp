#pragma once

#include "hough/accumulator.hpp"
#include "hough/builtins.hpp"
#include "hough/errors.hpp"
#include "hough/experiment.hpp"
#include "hough/family.hpp"
#include "hough/family_json.hpp"
#include "hough/geometry.hpp"
#include "hough/ht_matrix.hpp"
#include "hough/linalg.hpp"
#include "hough/pipeline.hpp"
#include "hough/polynomial.hpp"
#include "hough/projective.hpp"
#include "hough/rational.hpp"
#include "hough/rng.hpp"
#include "hough/svg.hpp"
#include "hough/synthdata.hpp"
#include "hough/version.hpp"
