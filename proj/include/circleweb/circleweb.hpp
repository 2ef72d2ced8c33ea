#pragma once

#include "circleweb/errors.hpp"
#include "circleweb/minkgeom.hpp"
#include "circleweb/poly1.hpp"
#include "circleweb/poly3.hpp"
#include "circleweb/polycurve.hpp"
#include "circleweb/render.hpp"
#include "circleweb/webcore.hpp"
