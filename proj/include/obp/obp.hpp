#pragma once

#include "obp/adversaries.hpp"
#include "obp/algorithms.hpp"
#include "obp/certificate.hpp"
#include "obp/errors.hpp"
#include "obp/flow.hpp"
#include "obp/harness.hpp"
#include "obp/learn.hpp"
#include "obp/model.hpp"
#include "obp/oracles.hpp"
#include "obp/rational.hpp"
#include "obp/teg.hpp"
