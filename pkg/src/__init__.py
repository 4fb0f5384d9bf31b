#GF(2) workbench source package
