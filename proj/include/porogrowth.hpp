#pragma once

#include "porogrowth/adr.hpp"
#include "porogrowth/config.hpp"
#include "porogrowth/constitutive.hpp"
#include "porogrowth/coupling.hpp"
#include "porogrowth/errors.hpp"
#include "porogrowth/linalg.hpp"
#include "porogrowth/mesh.hpp"
#include "porogrowth/output.hpp"
#include "porogrowth/params.hpp"
#include "porogrowth/poroelastic.hpp"
#include "porogrowth/scenario.hpp"
#include "porogrowth/state.hpp"
#include "porogrowth/verification.hpp"
