#pragma once

#include "eventua/algebra.hpp"
#include "eventua/ast.hpp"
#include "eventua/domains.hpp"
#include "eventua/error.hpp"
#include "eventua/eval.hpp"
#include "eventua/parse.hpp"
#include "eventua/print.hpp"
#include "eventua/rational.hpp"
#include "eventua/session.hpp"
#include "eventua/typecheck.hpp"
#include "eventua/world.hpp"
