# flownet unit tests
