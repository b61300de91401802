#pragma once

#include "monodromy/errors.hpp"
#include "monodromy/sl2.hpp"
#include "monodromy/jet.hpp"
#include "monodromy/rational.hpp"
#include "monodromy/path.hpp"
#include "monodromy/field.hpp"
#include "monodromy/dop853.hpp"
#include "monodromy/path_ode.hpp"
#include "monodromy/matrizant.hpp"
#include "monodromy/variation.hpp"
#include "monodromy/fuchsian.hpp"
#include "monodromy/io.hpp"
#include "monodromy/commands.hpp"
