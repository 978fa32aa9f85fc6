#pragma once

#include <rwslice/builtins.hpp>
#include <rwslice/concretize.hpp>
#include <rwslice/engine.hpp>
#include <rwslice/errors.hpp>
#include <rwslice/label.hpp>
#include <rwslice/match.hpp>
#include <rwslice/report.hpp>
#include <rwslice/signature.hpp>
#include <rwslice/slicer.hpp>
#include <rwslice/syntax.hpp>
#include <rwslice/term.hpp>
#include <rwslice/theory.hpp>
#include <rwslice/trace.hpp>
#include <rwslice/trace_io.hpp>
