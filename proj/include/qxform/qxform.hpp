#pragma once

#include "qxform/algebra.hpp"
#include "qxform/errors.hpp"
#include "qxform/examples.hpp"
#include "qxform/propagate.hpp"
#include "qxform/systems.hpp"
#include "qxform/timefn.hpp"
#include "qxform/transforms.hpp"
