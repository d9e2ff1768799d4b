#pragma once

#include "twistk/bredon.hpp"
#include "twistk/character.hpp"
#include "twistk/cocycle.hpp"
#include "twistk/cyclotomic.hpp"
#include "twistk/error.hpp"
#include "twistk/extension.hpp"
#include "twistk/group.hpp"
#include "twistk/json_io.hpp"
#include "twistk/kspectral.hpp"
#include "twistk/linalg.hpp"
#include "twistk/numeric.hpp"
#include "twistk/twisted.hpp"
