/// @file ctev.hpp
/// @brief Umbrella header.
#pragma once

#include "ctev/errors.hpp"
#include "ctev/specfun.hpp"
#include "ctev/rootfind.hpp"
#include "ctev/medium.hpp"
#include "ctev/dispersion.hpp"
#include "ctev/eigenpairs.hpp"
#include "ctev/forward.hpp"
#include "ctev/recon.hpp"
#include "ctev/iod.hpp"
#include "ctev/experiments.hpp"
#include "ctev/verify.hpp"
