#pragma once

#include "dwline/qz.hpp"
#include "dwline/int_matrix.hpp"
#include "dwline/group.hpp"
#include "dwline/cochain.hpp"
#include "dwline/lift.hpp"
#include "dwline/moduli.hpp"
#include "dwline/groupoid.hpp"
#include "dwline/torus_line.hpp"
