#pragma once

#include "sturmspec/error.hpp"
#include "sturmspec/problem.hpp"
#include "sturmspec/shoot.hpp"
#include "sturmspec/spectrum.hpp"
#include "sturmspec/specfun.hpp"
#include "sturmspec/transforms.hpp"
#include "sturmspec/heleshaw.hpp"
#include "sturmspec/numerics.hpp"
#include "sturmspec/cli/expr.hpp"
#include "sturmspec/cli/config.hpp"
#include "sturmspec/cli/output.hpp"
