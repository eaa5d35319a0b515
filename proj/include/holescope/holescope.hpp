#ifndef HOLESCOPE_HOLESCOPE_HPP
#define HOLESCOPE_HOLESCOPE_HPP

#include "holescope/coeffs.hpp"
#include "holescope/growth.hpp"
#include "holescope/holeprob.hpp"
#include "holescope/sampling.hpp"
#include "holescope/verify.hpp"
#include "holescope/zerocount.hpp"

#endif  // HOLESCOPE_HOLESCOPE_HPP
