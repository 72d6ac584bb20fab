#pragma once

#include "cadyn/alphabet.hpp"
#include "cadyn/blocking.hpp"
#include "cadyn/configuration.hpp"
#include "cadyn/decision.hpp"
#include "cadyn/error.hpp"
#include "cadyn/factor.hpp"
#include "cadyn/render.hpp"
#include "cadyn/rule.hpp"
#include "cadyn/rule_io.hpp"
#include "cadyn/scan.hpp"
#include "cadyn/trace.hpp"
