#pragma once

#include "sungeo/error.hpp"
#include "sungeo/matrix_core.hpp"
#include "sungeo/spectral.hpp"
#include "sungeo/logmin.hpp"
#include "sungeo/geometry.hpp"
