#pragma once

#include "qcap/bounds.hpp"
#include "qcap/channel.hpp"
#include "qcap/entropy.hpp"
#include "qcap/environment.hpp"
#include "qcap/error.hpp"
#include "qcap/fock.hpp"
#include "qcap/gaussian.hpp"
#include "qcap/linalg.hpp"
#include "qcap/sweep.hpp"
