#pragma once

#include "qcorr/entropy.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/io.hpp"
#include "qcorr/lab.hpp"
#include "qcorr/partition.hpp"
#include "qcorr/states.hpp"
#include "qcorr/syntax.hpp"
#include "qcorr/tensor.hpp"
#include "qcorr/version.hpp"
