#pragma once

#include "bergman/types.hpp"
#include "bergman/multi_index.hpp"
#include "bergman/domains.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/aniso_box.hpp"
#include "bergman/norms.hpp"
#include "bergman/deriv_table.hpp"
#include "bergman/kernel_model.hpp"
#include "bergman/closed_form_kernel.hpp"
#include "bergman/geometry.hpp"
#include "bergman/maps.hpp"
#include "bergman/minint.hpp"
#include "bergman/experiments/directions.hpp"
#include "bergman/experiments/sweep.hpp"
#include "bergman/experiments/ratio.hpp"
#include "bergman/experiments/localization.hpp"
#include "bergman/experiments/squeeze.hpp"
#include "bergman/experiments/weight.hpp"
#include "bergman/io.hpp"
#include "bergman/verify.hpp"
