#pragma once

#include "eplab/comparison.hpp"
#include "eplab/ep1d.hpp"
#include "eplab/ep1d_csv.hpp"
#include "eplab/initial_data.hpp"
#include "eplab/integrator.hpp"
#include "eplab/io.hpp"
#include "eplab/phase_plane.hpp"
#include "eplab/portrait.hpp"
#include "eplab/spectral.hpp"
#include "eplab/threshold.hpp"
