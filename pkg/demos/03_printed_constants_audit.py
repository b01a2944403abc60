"""Check the 23 published series constants against the expansion."""
# %%
from hpm_ecoepi.model import FIG1_PARAMS, FIG1_STATE
from hpm_ecoepi.paper_series import AUDIT_PARAMS, audit, exit_status, initial_defect, paper_coefficients

# d2 = 0.3 keeps formulas that differ only by d1 vs d2 from agreeing by accident
report = audit(AUDIT_PARAMS, FIG1_STATE)
print(report.to_table())
print("exit status:", exit_status(report))

# %%
# With the original rates d1 == d2 several wrong formulas happen to give the
# right number.  The audit flags those instead of calling them matches.
fig1 = audit(FIG1_PARAMS, FIG1_STATE)
print("coincidental:", sorted(fig1.coincidences))

# %%
# The printed series should equal the initial data at t = 0; it does not.
print(initial_defect(paper_coefficients(AUDIT_PARAMS, FIG1_STATE)))
